//! Removable subsets and essential complexes, lower-star filters, and the
//! action of simplicial automorphisms on fibers.

use std::collections::BTreeMap;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::complex::{
    automorphisms, boundary_matrix, SimplexId, SimplicialComplex, VertexPermutation,
};
use crate::error::{Error, Result};
use crate::fiber::FiberComplex;
use crate::field::{FieldSpec, Matrix};
use crate::morphism::MonodromyRecord;
use crate::persistence::Filter;
use crate::strata::FilterStratum;

/// Default number of candidate subcomplexes `is_essential` will inspect.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovabilityReport {
    /// Sorted simplex ids of the tested subset.
    pub subset: Vec<SimplexId>,
    pub is_subcomplex_complement: bool,
    pub homology_preserved: bool,
}

impl RemovabilityReport {
    pub fn removable(&self) -> bool {
        self.is_subcomplex_complement && self.homology_preserved
    }
}

/// Whether deleting `subset` leaves a subcomplex whose inclusion induces an
/// isomorphism on homology with coefficients in `field`.
pub fn is_removable(
    k: &SimplicialComplex,
    subset: &[SimplexId],
    field: FieldSpec,
) -> Result<RemovabilityReport> {
    let n = k.simplex_count();
    let mut keep = vec![true; n];
    for &s in subset {
        if s >= n {
            return Err(Error::InvalidInput(format!("simplex id {s} out of range")));
        }
        keep[s] = false;
    }
    let mut sorted: Vec<SimplexId> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let closed = k.is_closed(&keep);
    let preserved = closed && inclusion_is_iso(k, &keep, field);
    Ok(RemovabilityReport {
        subset: sorted,
        is_subcomplex_complement: closed,
        homology_preserved: preserved,
    })
}

/// For a closed subset `keep`, tests in each degree that `H_p(A) → H_p(K)` is
/// injective and surjective. The image of `H_p(A)` has dimension
/// `rank[B_p(K) | Z_p(A)] - rank B_p(K)`.
fn inclusion_is_iso(k: &SimplicialComplex, keep: &[bool], field: FieldSpec) -> bool {
    let d = k.dimension();
    let boundary: Vec<Matrix> = (0..=d)
        .map(|p| boundary_matrix(k, p, field).expect("degree in range"))
        .collect();
    for p in 0..=d {
        let range = k.simplices_of_dim(p);
        let in_a: Vec<usize> = range
            .clone()
            .filter(|&s| keep[s])
            .map(|s| s - range.start)
            .collect();
        let z_k = range.len() - boundary[p].rank();
        let b_k = if p < d { boundary[p + 1].rank() } else { 0 };
        let cycles_a = boundary[p].select_columns(&in_a).kernel();
        let b_a = if p < d {
            let up = k.simplices_of_dim(p + 1);
            let cols: Vec<usize> = up
                .clone()
                .filter(|&s| keep[s])
                .map(|s| s - up.start)
                .collect();
            boundary[p + 1].select_columns(&cols).rank()
        } else {
            0
        };
        let beta_a = cycles_a.cols() - b_a;
        let beta_k = z_k - b_k;
        if beta_a != beta_k {
            return false;
        }
        // embed Z_p(A) into C_p(K)
        let mut z = Matrix::zeros(range.len(), cycles_a.cols(), field);
        for (i, &row) in in_a.iter().enumerate() {
            for j in 0..cycles_a.cols() {
                z.set(row, j, cycles_a.get(i, j));
            }
        }
        let image = if p < d {
            let bk = &boundary[p + 1];
            bk.hconcat(&z).rank() - b_k
        } else {
            z.rank()
        };
        if image != beta_k {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EssentialityReport {
    pub essential: bool,
    /// A nonempty removable subset, when one exists.
    pub witness: Option<RemovabilityReport>,
    pub candidates_checked: u64,
}

/// Searches every proper subcomplex `A` for one whose complement is removable.
/// Fails once more than `budget` candidates have been inspected without
/// finding a witness.
pub fn is_essential(
    k: &SimplicialComplex,
    field: FieldSpec,
    budget: u64,
) -> Result<EssentialityReport> {
    let n = k.simplex_count();
    let mut keep = vec![false; n];
    let mut checked = 0u64;
    let mut witness = None;
    search_subcomplexes(k, field, budget, 0, &mut keep, &mut checked, &mut witness)?;
    Ok(EssentialityReport {
        essential: witness.is_none(),
        witness,
        candidates_checked: checked,
    })
}

// Decides membership simplex by simplex in id order; faces come before
// cofaces, so closure only needs the facets of the current simplex.
fn search_subcomplexes(
    k: &SimplicialComplex,
    field: FieldSpec,
    budget: u64,
    id: usize,
    keep: &mut Vec<bool>,
    checked: &mut u64,
    witness: &mut Option<RemovabilityReport>,
) -> Result<()> {
    if witness.is_some() {
        return Ok(());
    }
    if id == keep.len() {
        if keep.iter().all(|&b| b) {
            return Ok(());
        }
        *checked += 1;
        if *checked > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        if inclusion_is_iso(k, keep, field) {
            let subset: Vec<SimplexId> = (0..keep.len()).filter(|&s| !keep[s]).collect();
            *witness = Some(RemovabilityReport {
                subset,
                is_subcomplex_complement: true,
                homology_preserved: true,
            });
        }
        return Ok(());
    }
    if k.facets(id).iter().all(|&f| keep[f]) {
        keep[id] = true;
        search_subcomplexes(k, field, budget, id + 1, keep, checked, witness)?;
        keep[id] = false;
    }
    search_subcomplexes(k, field, budget, id + 1, keep, checked, witness)
}

/// The lower-star filter `σ ↦ max_{v ∈ σ} f(v)`.
pub fn lower_star_extension(
    k: &SimplicialComplex,
    vertex_values: &BTreeMap<u32, BigRational>,
) -> Result<Filter> {
    let mut per_vertex = Vec::with_capacity(k.vertices().len());
    for &v in k.vertices() {
        let x = vertex_values
            .get(&v)
            .ok_or_else(|| Error::NotAFilter(format!("no value for vertex {v}")))?;
        per_vertex.push(x.clone());
    }
    let values = (0..k.simplex_count())
        .map(|s| {
            k.vertex_ids(s)
                .into_iter()
                .map(|v| per_vertex[v].clone())
                .max()
                .expect("simplices are nonempty")
        })
        .collect();
    Filter::new(k, values)
}

/// Permutations of the cells and vertices of a fiber induced by `f ↦ f∘s⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberAction {
    pub permutation: VertexPermutation,
    pub cell_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl FiberAction {
    pub fn is_identity(&self) -> bool {
        self.cell_map.iter().enumerate().all(|(i, &c)| i == c)
    }
}

pub fn symmetry_action_on_fiber(
    k: &SimplicialComplex,
    fc: &FiberComplex,
    s: &VertexPermutation,
) -> Result<FiberAction> {
    let simplex_map = s.simplex_map(k)?;
    let mut cell_map = Vec::with_capacity(fc.cells.len());
    for cell in &fc.cells {
        let image: FilterStratum = cell.stratum.permute(&simplex_map);
        let id = fc.cell_of(&image).ok_or_else(|| {
            Error::Internal(format!("{image} left the fiber over {}", fc.barcode_type))
        })?;
        cell_map.push(id);
    }
    let vertex_map = fc
        .vertices
        .iter()
        .map(|v| {
            fc.vertex_of_cell(cell_map[v.cell]).ok_or_else(|| {
                Error::Internal("a vertex was sent to a positive-dimensional cell".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FiberAction {
        permutation: s.clone(),
        cell_map,
        vertex_map,
    })
}

/// Checks `M(s·v) = s·M(v)` on every vertex of the source fiber.
pub fn monodromy_commutes(m: &MonodromyRecord, source: &FiberAction, target: &FiberAction) -> bool {
    source.permutation == target.permutation
        && (0..m.vertex_map.len())
            .all(|v| m.vertex_map[source.vertex_map[v]] == target.vertex_map[m.vertex_map[v]])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellOrbit {
    pub dim: usize,
    pub gap_shape: Vec<usize>,
    pub representative: FilterStratum,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub barcode_type: String,
    pub group_order: usize,
    pub orbits: Vec<CellOrbit>,
}

/// Orbits of the automorphism group of `k` on the cells of `fc`, ordered by
/// dimension and then by smallest member.
pub fn orbit_table(k: &SimplicialComplex, fc: &FiberComplex) -> Result<OrbitTable> {
    let group = automorphisms(k);
    let actions = group
        .iter()
        .map(|s| symmetry_action_on_fiber(k, fc, s))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = vec![false; fc.cells.len()];
    let mut orbits = Vec::new();
    for c in 0..fc.cells.len() {
        if seen[c] {
            continue;
        }
        let mut cells: Vec<usize> = actions.iter().map(|a| a.cell_map[c]).collect();
        cells.sort_unstable();
        cells.dedup();
        for &x in &cells {
            seen[x] = true;
        }
        orbits.push(CellOrbit {
            dim: fc.cells[c].dim,
            gap_shape: fc.cells[c].gap_shape.clone(),
            representative: fc.cells[c].stratum.clone(),
            cells,
        });
    }
    orbits.sort_by_key(|o| (o.dim, o.cells[0]));
    Ok(OrbitTable {
        barcode_type: fc.barcode_type.to_string(),
        group_order: group.len(),
        orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::CombinatorialBarcode;
    use crate::complex::build_complex;
    use crate::fiber::fiber_complex;
    use crate::morphism::{enumerate_morphism_classes, monodromy_map};
    use crate::persistence::ratio;
    use std::collections::BTreeSet;

    fn triangle() -> SimplicialComplex {
        build_complex(&[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    fn ty(s: &str) -> CombinatorialBarcode {
        s.parse().unwrap()
    }

    // Homology of K∖L compared through Betti numbers only, with an explicit
    // check that H_0 classes map to distinct components.
    fn oracle_removable(k: &SimplicialComplex, subset: &[SimplexId]) -> bool {
        let keep: Vec<bool> = (0..k.simplex_count())
            .map(|s| !subset.contains(&s))
            .collect();
        match k.subcomplex(&keep) {
            None => false,
            Some((a, _)) if a.simplex_count() == 0 => false,
            Some((a, _)) => {
                let mut ba = crate::persistence::betti_numbers(&a, FieldSpec::F2);
                let bk = crate::persistence::betti_numbers(k, FieldSpec::F2);
                ba.resize(bk.len(), 0);
                ba == bk
            }
        }
    }

    #[test]
    fn interval_minus_edge_and_endpoint() {
        let k = build_complex(&[vec![0, 1]]).unwrap();
        let r = is_removable(&k, &[1, 2], FieldSpec::F2).unwrap();
        assert!(r.removable());
        assert!(oracle_removable(&k, &[1, 2]));
        let r = is_removable(&k, &[2], FieldSpec::F2).unwrap();
        assert!(r.is_subcomplex_complement && !r.removable());
        let r = is_removable(&k, &[0], FieldSpec::F2).unwrap();
        assert!(!r.is_subcomplex_complement);
    }

    #[test]
    fn empty_subset_is_removable() {
        for k in [triangle(), build_complex(&[vec![0, 1]]).unwrap()] {
            assert!(is_removable(&k, &[], FieldSpec::F2).unwrap().removable());
        }
    }

    #[test]
    fn no_nonempty_subset_of_the_triangle_is_removable() {
        let k = triangle();
        for mask in 1u32..64 {
            let l: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            let r = is_removable(&k, &l, FieldSpec::F2).unwrap();
            assert!(!r.removable(), "{l:?}");
        }
    }

    #[test]
    fn betti_equality_is_not_enough() {
        // two disjoint edges a-b and c-d; keeping {a, c} includes isomorphically,
        // keeping {a, b} has the same Betti numbers but hits one component
        let k = build_complex(&[vec![0, 1], vec![2, 3]]).unwrap();
        let id = |v: Vec<u32>| k.id_of(&crate::complex::Simplex::new(v).unwrap()).unwrap();
        let drop_bd = vec![id(vec![1]), id(vec![3]), id(vec![0, 1]), id(vec![2, 3])];
        let drop_cd = vec![id(vec![2]), id(vec![3]), id(vec![0, 1]), id(vec![2, 3])];
        assert!(is_removable(&k, &drop_bd, FieldSpec::F2)
            .unwrap()
            .removable());
        let r = is_removable(&k, &drop_cd, FieldSpec::F2).unwrap();
        assert!(r.is_subcomplex_complement && !r.removable());
        assert!(oracle_removable(&k, &drop_cd), "Betti numbers alone agree");
    }

    #[test]
    fn essentiality_examples() {
        let f2 = FieldSpec::F2;
        assert!(
            is_essential(&triangle(), f2, DEFAULT_BUDGET)
                .unwrap()
                .essential
        );
        let wedge = build_complex(&[
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 3],
            vec![0, 4],
            vec![3, 4],
        ])
        .unwrap();
        assert!(is_essential(&wedge, f2, DEFAULT_BUDGET).unwrap().essential);
        let interval = build_complex(&[vec![0, 1]]).unwrap();
        let r = is_essential(&interval, f2, DEFAULT_BUDGET).unwrap();
        assert!(!r.essential);
        let w = r.witness.unwrap();
        assert_eq!(w.subset, vec![1, 2]);
        assert!(is_removable(&interval, &w.subset, f2).unwrap().removable());
    }

    #[test]
    fn budget_is_enforced() {
        let k = triangle();
        assert_eq!(
            is_essential(&k, FieldSpec::F2, 3),
            Err(Error::BudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn lower_star_examples() {
        let k = triangle();
        let vals: BTreeMap<u32, BigRational> =
            [(0, ratio(0, 1)), (1, ratio(1, 1)), (2, ratio(1, 1))].into();
        let f = lower_star_extension(&k, &vals).unwrap();
        assert_eq!(&f.values()[3..6], &[ratio(1, 1), ratio(1, 1), ratio(1, 1)]);
        let half: BTreeMap<u32, BigRational> = (0..3).map(|v| (v, ratio(1, 2))).collect();
        let f = lower_star_extension(&k, &half).unwrap();
        assert!(f.values().iter().all(|x| *x == ratio(1, 2)));
        assert!(FilterStratum::of_filter(&k, &f).is_lower_star(&k));
    }

    fn d2_components(k: &SimplicialComplex) -> (FiberComplex, Vec<usize>) {
        let fc = fiber_complex(k, &ty("0:(1,inf),(2,3);1:(4,inf)"), FieldSpec::F2).unwrap();
        let comps = fc.components();
        (fc, comps)
    }

    #[test]
    fn parity_of_permutation_decides_component_swap() {
        let k = triangle();
        let (fc, comps) = d2_components(&k);
        assert_eq!(comps.iter().collect::<BTreeSet<_>>().len(), 2);
        for s in automorphisms(&k) {
            let a = symmetry_action_on_fiber(&k, &fc, &s).unwrap();
            let swaps = (0..fc.cells.len()).all(|c| comps[a.cell_map[c]] != comps[c]);
            let keeps = (0..fc.cells.len()).all(|c| comps[a.cell_map[c]] == comps[c]);
            assert_eq!(keeps, s.is_even(&k), "{:?}", s.images);
            assert_eq!(swaps, !s.is_even(&k));
        }
    }

    #[test]
    fn identity_acts_trivially() {
        let k = triangle();
        let (fc, _) = d2_components(&k);
        let a = symmetry_action_on_fiber(&k, &fc, &VertexPermutation::identity(&k)).unwrap();
        assert!(a.is_identity());
    }

    #[test]
    fn non_automorphism_is_rejected() {
        let k = build_complex(&[vec![0, 1], vec![1, 2]]).unwrap();
        let fc = fiber_complex(&k, &ty("0:(1,inf)"), FieldSpec::F2);
        let s = VertexPermutation {
            images: vec![1, 0, 2],
        };
        if let Ok(fc) = fc {
            assert!(matches!(
                symmetry_action_on_fiber(&k, &fc, &s),
                Err(Error::NotAnAutomorphism(_))
            ));
        }
        assert!(s.simplex_map(&k).is_err());
    }

    #[test]
    fn monodromy_is_equivariant() {
        let k = triangle();
        let f2 = FieldSpec::F2;
        let pairs = [
            ("0:(1,inf),(2,3);1:(3,inf)", "0:(1,inf);1:(2,inf)"),
            ("0:(1,inf),(2,3);1:(3,inf)", "0:(1,inf),(1,2);1:(2,inf)"),
            ("0:(1,inf),(2,3);1:(4,inf)", "0:(1,inf),(2,3);1:(3,inf)"),
        ];
        for (a, b) in pairs {
            let fa = fiber_complex(&k, &ty(a), f2).unwrap();
            let fb = fiber_complex(&k, &ty(b), f2).unwrap();
            for c in enumerate_morphism_classes(&ty(a), &ty(b)) {
                let m = monodromy_map(&fa, &fb, &c).unwrap();
                for s in automorphisms(&k) {
                    let sa = symmetry_action_on_fiber(&k, &fa, &s).unwrap();
                    let sb = symmetry_action_on_fiber(&k, &fb, &s).unwrap();
                    assert!(monodromy_commutes(&m, &sa, &sb), "{a} -> {b}");
                }
            }
        }
    }

    #[test]
    fn mobius_two_cells_form_two_orbits() {
        let k = triangle();
        let fc = fiber_complex(&k, &ty("0:(1,inf);1:(2,inf)"), FieldSpec::F2).unwrap();
        let t = orbit_table(&k, &fc).unwrap();
        assert_eq!(t.group_order, 6);
        let top: Vec<usize> = t
            .orbits
            .iter()
            .filter(|o| o.dim == 2)
            .map(|o| o.cells.len())
            .collect();
        assert_eq!(top, vec![6, 6]);
        let total: usize = t.orbits.iter().map(|o| o.cells.len()).sum();
        assert_eq!(total, fc.cells.len());
    }
}
