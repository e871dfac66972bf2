//! Finite abstract simplicial complexes with a fixed canonical simplex order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Matrix};

/// A simplex, stored as its strictly increasing vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::MalformedSimplex(vertices));
        }
        let original = vertices.clone();
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(original));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces, the `i`-th omitting the `i`-th vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Simplex(v)
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl TryFrom<Vec<u32>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<u32> {
    fn from(s: Simplex) -> Vec<u32> {
        s.0
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Index of a simplex in the canonical order of its complex.
pub type SimplexId = usize;

/// A finite simplicial complex. Simplices are sorted by dimension and then
/// lexicographically, and referred to by their position in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, SimplexId>,
    facets: Vec<Vec<SimplexId>>,
    cofacets: Vec<Vec<SimplexId>>,
    dim_offsets: Vec<usize>,
    vertices: Vec<u32>,
}

/// Face closure of a list of maximal simplices.
pub fn build_complex(maximal_simplices: &[Vec<u32>]) -> Result<SimplicialComplex> {
    if maximal_simplices.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let mut all = std::collections::BTreeSet::new();
    for raw in maximal_simplices {
        let s = Simplex::new(raw.clone())?;
        let verts = s.vertices();
        let n = verts.len();
        if n > 24 {
            return Err(Error::InvalidInput(format!(
                "simplex {s} has {n} vertices; at most 24 are supported"
            )));
        }
        for mask in 1u32..(1u32 << n) {
            let face: Vec<u32> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| verts[i])
                .collect();
            all.insert(Simplex(face));
        }
    }
    Ok(SimplicialComplex::from_closed_set(
        all.into_iter().collect(),
    ))
}

impl SimplicialComplex {
    /// `simplices` must be sorted canonically and closed under faces.
    fn from_closed_set(simplices: Vec<Simplex>) -> Self {
        let index: HashMap<Simplex, SimplexId> = simplices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let facets: Vec<Vec<SimplexId>> = simplices
            .iter()
            .map(|s| s.facets().iter().map(|f| index[f]).collect())
            .collect();
        let mut cofacets = vec![Vec::new(); simplices.len()];
        for (i, fs) in facets.iter().enumerate() {
            for &f in fs {
                cofacets[f].push(i);
            }
        }
        let dim = simplices.last().map(|s| s.dim()).unwrap_or(0);
        let mut dim_offsets = vec![0; dim + 2];
        for s in &simplices {
            dim_offsets[s.dim() + 1] += 1;
        }
        for d in 1..dim_offsets.len() {
            dim_offsets[d] += dim_offsets[d - 1];
        }
        let vertices = simplices[..dim_offsets[1]]
            .iter()
            .map(|s| s.vertices()[0])
            .collect();
        SimplicialComplex {
            simplices,
            index,
            facets,
            cofacets,
            dim_offsets,
            vertices,
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn dimension(&self) -> usize {
        self.dim_offsets.len() - 2
    }

    pub fn id_of(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    /// Codimension-one faces of a simplex, ordered by omitted vertex position.
    pub fn facets(&self, id: SimplexId) -> &[SimplexId] {
        &self.facets[id]
    }

    /// Simplices having `id` as a codimension-one face.
    pub fn cofacets(&self, id: SimplexId) -> &[SimplexId] {
        &self.cofacets[id]
    }

    /// Ids of all simplices of dimension `p`; empty when `p` exceeds the dimension.
    pub fn simplices_of_dim(&self, p: usize) -> Range<usize> {
        if p + 1 >= self.dim_offsets.len() {
            let n = self.simplices.len();
            return n..n;
        }
        self.dim_offsets[p]..self.dim_offsets[p + 1]
    }

    /// Sorted vertex labels.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: u32) -> Option<SimplexId> {
        self.vertices.binary_search(&v).ok()
    }

    /// Simplex ids of the vertices of `id`.
    pub fn vertex_ids(&self, id: SimplexId) -> Vec<SimplexId> {
        self.simplices[id]
            .vertices()
            .iter()
            .map(|v| self.vertex_id(*v).expect("vertex of a member simplex"))
            .collect()
    }

    /// Maximal simplices, in canonical order.
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        (0..self.simplices.len())
            .filter(|&i| self.cofacets[i].is_empty())
            .map(|i| &self.simplices[i])
            .collect()
    }

    /// Whether a set of simplex ids is closed under taking faces.
    pub fn is_closed(&self, members: &[bool]) -> bool {
        (0..self.simplices.len())
            .filter(|&i| members[i])
            .all(|i| self.facets[i].iter().all(|&f| members[f]))
    }

    /// Subcomplex spanned by a face-closed set of simplex ids, with the map from
    /// its canonical ids back to ids of `self`.
    pub fn subcomplex(&self, members: &[bool]) -> Option<(SimplicialComplex, Vec<SimplexId>)> {
        debug_assert!(self.is_closed(members));
        let ids: Vec<SimplexId> = (0..self.simplices.len()).filter(|&i| members[i]).collect();
        if ids.is_empty() {
            return None;
        }
        let simplices = ids.iter().map(|&i| self.simplices[i].clone()).collect();
        Some((SimplicialComplex::from_closed_set(simplices), ids))
    }
}

/// Signed incidence matrix of the boundary map from `p`-chains to `(p-1)`-chains.
pub fn boundary_matrix(k: &SimplicialComplex, p: usize, field: FieldSpec) -> Result<Matrix> {
    if p > k.dimension() {
        return Err(Error::DegreeOutOfRange {
            degree: p,
            dim: k.dimension(),
        });
    }
    let cols = k.simplices_of_dim(p);
    if p == 0 {
        return Ok(Matrix::zeros(0, cols.len(), field));
    }
    let rows = k.simplices_of_dim(p - 1);
    let mut m = Matrix::zeros(rows.len(), cols.len(), field);
    for (j, s) in cols.clone().enumerate() {
        for (i, &face) in k.facets(s).iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { field.neg(1) };
            m.set(face - rows.start, j, sign);
        }
    }
    Ok(m)
}

/// A bijection of the vertex set, `images[i]` being the image of the `i`-th
/// vertex in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexPermutation {
    pub images: Vec<u32>,
}

impl VertexPermutation {
    pub fn identity(k: &SimplicialComplex) -> Self {
        VertexPermutation {
            images: k.vertices().to_vec(),
        }
    }

    pub fn apply(&self, k: &SimplicialComplex, v: u32) -> Option<u32> {
        k.vertex_id(v).map(|i| self.images[i])
    }

    pub fn is_identity(&self, k: &SimplicialComplex) -> bool {
        self.images == k.vertices()
    }

    /// `self ∘ other`.
    pub fn compose(&self, k: &SimplicialComplex, other: &VertexPermutation) -> VertexPermutation {
        VertexPermutation {
            images: other
                .images
                .iter()
                .map(|&v| self.apply(k, v).expect("image is a vertex"))
                .collect(),
        }
    }

    pub fn inverse(&self, k: &SimplicialComplex) -> VertexPermutation {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[k.vertex_id(img).expect("image is a vertex")] = k.vertices()[i];
        }
        VertexPermutation { images }
    }

    /// Sign of the permutation of the vertex set.
    pub fn is_even(&self, k: &SimplicialComplex) -> bool {
        let perm: Vec<usize> = self
            .images
            .iter()
            .map(|&v| k.vertex_id(v).expect("image is a vertex"))
            .collect();
        let mut seen = vec![false; perm.len()];
        let mut transpositions = 0;
        for start in 0..perm.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    /// Induced permutation on simplex ids; fails if some simplex is not sent
    /// to a simplex.
    pub fn simplex_map(&self, k: &SimplicialComplex) -> Result<Vec<SimplexId>> {
        if self.images.len() != k.vertices().len() {
            return Err(Error::NotAnAutomorphism(format!(
                "expected {} vertex images, got {}",
                k.vertices().len(),
                self.images.len()
            )));
        }
        let mut out = Vec::with_capacity(k.simplex_count());
        let mut hit = vec![false; k.simplex_count()];
        for s in k.simplices() {
            let mut img = Vec::with_capacity(s.vertices().len());
            for &v in s.vertices() {
                match self.apply(k, v) {
                    Some(w) => img.push(w),
                    None => {
                        return Err(Error::NotAnAutomorphism(format!(
                            "vertex {v} not in complex"
                        )))
                    }
                }
            }
            let img = Simplex::new(img)
                .map_err(|_| Error::NotAnAutomorphism("vertex map is not injective".into()))?;
            let id = k.id_of(&img).ok_or_else(|| {
                Error::NotAnAutomorphism(format!("{s} is sent to non-simplex {img}"))
            })?;
            if hit[id] {
                return Err(Error::NotAnAutomorphism(
                    "vertex map is not injective".into(),
                ));
            }
            hit[id] = true;
            out.push(id);
        }
        Ok(out)
    }
}

/// All simplicial automorphisms of `k`, sorted lexicographically by image list.
pub fn automorphisms(k: &SimplicialComplex) -> Vec<VertexPermutation> {
    let n = k.vertices().len();
    let dim = k.dimension();
    // profile[v][d] = number of d-simplices containing vertex v
    let mut profile = vec![vec![0usize; dim + 1]; n];
    for id in 0..k.simplex_count() {
        for v in k.vertex_ids(id) {
            profile[v][k.simplex(id).dim()] += 1;
        }
    }
    // simplices whose largest vertex (by position) is v
    let mut closing: Vec<Vec<SimplexId>> = vec![Vec::new(); n];
    for id in n..k.simplex_count() {
        let last = *k.vertex_ids(id).last().unwrap();
        closing[last].push(id);
    }
    let mut assignment: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut out = Vec::new();
    extend_automorphism(k, &profile, &closing, &mut assignment, &mut used, &mut out);
    out
}

fn extend_automorphism(
    k: &SimplicialComplex,
    profile: &[Vec<usize>],
    closing: &[Vec<SimplexId>],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<VertexPermutation>,
) {
    let v = assignment.len();
    let n = profile.len();
    if v == n {
        out.push(VertexPermutation {
            images: assignment.iter().map(|&w| k.vertices()[w]).collect(),
        });
        return;
    }
    for w in 0..n {
        if used[w] || profile[w] != profile[v] {
            continue;
        }
        assignment.push(w);
        let ok = closing[v].iter().all(|&id| {
            let img: Vec<u32> = k
                .vertex_ids(id)
                .iter()
                .map(|&x| k.vertices()[assignment[x]])
                .collect();
            Simplex::new(img).ok().and_then(|s| k.id_of(&s)).is_some()
        });
        if ok {
            used[w] = true;
            extend_automorphism(k, profile, closing, assignment, used, out);
            used[w] = false;
        }
        assignment.pop();
    }
}
