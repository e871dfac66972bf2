//! Homotopy classes of barcode morphisms and the monodromy maps they induce
//! between fibers.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::barcode::{raw_image, Bar, CombinatorialBarcode, Endpoint, EndpointMap};
use crate::error::{Error, Result};
use crate::fiber::{regroup, BlockRole, FiberComplex};

/// Per degree, the target bar (index into the target's bars of that degree)
/// that each source bar is sent to; `None` when the bar collapses.
pub type BarMatching = Vec<Vec<Option<usize>>>;

/// A homotopy class of morphisms between two barcode types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismClass {
    pub source: CombinatorialBarcode,
    pub target: CombinatorialBarcode,
    pub matching: BarMatching,
    /// Lexicographically smallest simplicial endpoint map in the class.
    pub representative: EndpointMap,
}

impl MorphismClass {
    /// The class of a given endpoint map, which must push `source` onto `target`.
    pub fn of_map(
        source: &CombinatorialBarcode,
        target: &CombinatorialBarcode,
        phi: EndpointMap,
    ) -> Result<Self> {
        if phi.source_dim() != source.dim() || phi.target_dim() != target.dim() {
            return Err(Error::MismatchedFibers(format!(
                "endpoint map {phi} does not go from {source} to {target}"
            )));
        }
        if raw_image(&phi, source).as_ref() != Some(target) {
            return Err(Error::NotSimplicial(format!(
                "{phi} does not send {source} onto {target}"
            )));
        }
        Ok(MorphismClass {
            matching: matching_of(&phi, source, target),
            source: source.clone(),
            target: target.clone(),
            representative: phi,
        })
    }

    /// For each target symbol `Zero, 1..m', One`, the source symbols sent to it.
    pub fn index(&self) -> Vec<(Endpoint, Vec<Endpoint>)> {
        let mut out: Vec<(Endpoint, Vec<Endpoint>)> = self
            .target
            .symbols()
            .into_iter()
            .map(|e| (e, Vec::new()))
            .collect();
        for s in self.source.symbols() {
            let img = self.representative.apply(s);
            out[img.index(self.target.dim())].1.push(s);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.representative.is_identity()
    }

    /// The matching with target bars written out, which forgets the order
    /// among identical target bars.
    pub fn matched_bars(&self) -> Vec<Vec<Option<Bar>>> {
        matching_images(&self.matching, &self.target)
    }
}

/// Replaces target bar indices by the bars themselves.
pub fn matching_images(
    matching: &BarMatching,
    target: &CombinatorialBarcode,
) -> Vec<Vec<Option<Bar>>> {
    matching
        .iter()
        .enumerate()
        .map(|(p, row)| row.iter().map(|j| j.map(|j| target.bars(p)[j])).collect())
        .collect()
}

fn matching_of(
    phi: &EndpointMap,
    source: &CombinatorialBarcode,
    target: &CombinatorialBarcode,
) -> BarMatching {
    phi.push_bars(source)
        .into_iter()
        .enumerate()
        .map(|(p, images)| {
            let bars = target.bars(p);
            let mut used = vec![false; bars.len()];
            images
                .into_iter()
                .map(|img| {
                    let img = img?;
                    let j = (0..bars.len()).find(|&j| !used[j] && bars[j] == img)?;
                    used[j] = true;
                    Some(j)
                })
                .collect()
        })
        .collect()
}

/// All homotopy classes of morphisms `t → t2`, keyed by bar matching, in
/// lexicographic order of their representatives.
pub fn enumerate_morphism_classes(
    t: &CombinatorialBarcode,
    t2: &CombinatorialBarcode,
) -> Vec<MorphismClass> {
    let mut target_counts: BTreeMap<(usize, Bar), usize> = BTreeMap::new();
    for (p, bars) in t2.degrees().iter().enumerate() {
        for b in bars {
            *target_counts.entry((p, *b)).or_default() += 1;
        }
    }
    let mut seen: BTreeMap<BarMatching, ()> = BTreeMap::new();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(t.dim() as usize);
    enumerate_maps(t, t2, &target_counts, &mut images, &mut |phi| {
        if let Ok(class) = MorphismClass::of_map(t, t2, phi) {
            if seen.insert(class.matching.clone(), ()).is_none() {
                out.push(class);
            }
        }
    });
    out
}

fn enumerate_maps(
    t: &CombinatorialBarcode,
    t2: &CombinatorialBarcode,
    target_counts: &BTreeMap<(usize, Bar), usize>,
    images: &mut Vec<Endpoint>,
    visit: &mut dyn FnMut(EndpointMap),
) {
    let m = t.dim() as usize;
    let m2 = t2.dim();
    if !partial_images_fit(t, target_counts, images) {
        return;
    }
    if images.len() == m {
        visit(EndpointMap::new(m2, images.clone()).expect("monotone by construction"));
        return;
    }
    let low = images.last().map(|e| e.index(m2)).unwrap_or(0);
    for i in low..=m2 as usize + 1 {
        images.push(Endpoint::from_index(i, m2));
        enumerate_maps(t, t2, target_counts, images, visit);
        images.pop();
    }
}

/// Whether the bars whose endpoints already have images can still be matched
/// into the target without exceeding multiplicities.
fn partial_images_fit(
    t: &CombinatorialBarcode,
    target_counts: &BTreeMap<(usize, Bar), usize>,
    images: &[Endpoint],
) -> bool {
    let image = |e: Endpoint| -> Option<Endpoint> {
        match e {
            Endpoint::Zero | Endpoint::One | Endpoint::Inf => Some(e),
            Endpoint::Rank(r) => images.get(r as usize - 1).copied(),
        }
    };
    let mut counts: BTreeMap<(usize, Bar), usize> = BTreeMap::new();
    for (p, bars) in t.degrees().iter().enumerate() {
        for b in bars {
            let (Some(x), Some(y)) = (image(b.birth), image(b.death)) else {
                continue;
            };
            if x == y {
                continue;
            }
            let key = (p, Bar { birth: x, death: y });
            let c = counts.entry(key).or_default();
            *c += 1;
            if *c > target_counts.get(&key).copied().unwrap_or(0) {
                return false;
            }
        }
    }
    true
}

/// Elementary map merging symbol index `x` into the adjacent index `y`.
fn merge_map(m: u32, x: usize, y: usize) -> EndpointMap {
    let hi = x.max(y);
    let ranks = (1..=m as usize)
        .map(|i| Endpoint::from_index(if i >= hi { i - 1 } else { i }, m - 1))
        .collect();
    EndpointMap::new(m - 1, ranks).expect("merge maps are monotone")
}

/// Factors a class into steps each lowering the dimension by exactly one.
/// The identity class yields an empty sequence.
pub fn decompose_codim1(c: &MorphismClass) -> Result<Vec<MorphismClass>> {
    if !c.representative.is_simplicial() {
        return Err(Error::NotSimplicial(c.representative.to_string()));
    }
    let mut steps = Vec::new();
    let mut current = c.source.clone();
    // remaining map from the current type to the target, as symbol indices
    let mut psi: Vec<usize> = c
        .source
        .symbols()
        .into_iter()
        .map(|s| c.representative.apply(s).index(c.target.dim()))
        .collect();
    loop {
        let m = current.dim();
        let Some(start) = (0..psi.len() - 1).find(|&i| psi[i] == psi[i + 1]) else {
            break;
        };
        let value = psi[start];
        let end = (start..psi.len())
            .take_while(|&i| psi[i] == value)
            .last()
            .unwrap();
        let anchor = if value == 0 {
            0
        } else if value == c.target.dim() as usize + 1 {
            psi.len() - 1
        } else {
            // a symbol of the block carrying an endpoint of a surviving bar
            (start..=end)
                .find(|&i| {
                    current.degrees().iter().flatten().any(|b| {
                        let (bi, di) = (b.birth.index(m), b.death.index(m));
                        let survives = di == m as usize + 2 || psi[bi] != psi[di];
                        survives && (bi == i || di == i)
                    })
                })
                .ok_or_else(|| {
                    Error::Internal("no surviving endpoint in a preimage block".into())
                })?
        };
        let x = if anchor < end { anchor + 1 } else { anchor - 1 };
        let step_map = merge_map(m, x, anchor);
        let next = raw_image(&step_map, &current).ok_or_else(|| {
            Error::Internal(format!(
                "merge of symbols {x},{anchor} in {current} dropped two ranks"
            ))
        })?;
        steps.push(MorphismClass::of_map(&current, &next, step_map)?);
        psi.remove(x.max(anchor));
        current = next;
    }
    if current != c.target {
        return Err(Error::Internal(format!(
            "factorization ended at {current}, expected {}",
            c.target
        )));
    }
    Ok(steps)
}

/// Composite representative of a sequence of classes.
pub fn compose_representatives(steps: &[MorphismClass], source_dim: u32) -> Result<EndpointMap> {
    let mut acc = EndpointMap::identity(source_dim);
    for s in steps {
        acc = acc.then(&s.representative)?;
    }
    Ok(acc)
}

/// Composite bar matching of a sequence of matchings.
pub fn compose_matchings(first: &BarMatching, second: &BarMatching) -> BarMatching {
    first
        .iter()
        .enumerate()
        .map(|(p, row)| {
            row.iter()
                .map(|j| j.and_then(|j| second.get(p).and_then(|r| r[j])))
                .collect()
        })
        .collect()
}

/// The map between fibers induced by a class, on cells and on vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyRecord {
    pub source: CombinatorialBarcode,
    pub target: CombinatorialBarcode,
    #[serde(serialize_with = "serialize_map")]
    pub representative: EndpointMap,
    pub vertex_map: Vec<usize>,
    pub cell_map: Vec<usize>,
    #[serde(skip)]
    pub source_cell_dims: Vec<usize>,
    #[serde(skip)]
    pub target_cell_dims: Vec<usize>,
    pub collapsed_cells: Vec<usize>,
    pub surviving_cells: Vec<usize>,
}

fn serialize_map<S: serde::Serializer>(
    phi: &EndpointMap,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(phi.rank_images().iter().map(|e| e.to_string()))
}

impl MonodromyRecord {
    fn finish(mut self) -> Self {
        let (collapsed, surviving): (Vec<usize>, Vec<usize>) = (0..self.cell_map.len())
            .partition(|&c| self.target_cell_dims[self.cell_map[c]] < self.source_cell_dims[c]);
        self.collapsed_cells = collapsed;
        self.surviving_cells = surviving;
        self
    }

    /// Collapsed cells of a given source dimension.
    pub fn collapsed_of_dim(&self, d: usize) -> usize {
        self.collapsed_cells
            .iter()
            .filter(|&&c| self.source_cell_dims[c] == d)
            .count()
    }
}

/// Applies the representative of `c` to every cell and vertex of `fc`.
pub fn monodromy_map(
    fc: &FiberComplex,
    fc2: &FiberComplex,
    c: &MorphismClass,
) -> Result<MonodromyRecord> {
    if fc.barcode_type != c.source || fc2.barcode_type != c.target {
        return Err(Error::MismatchedFibers(format!(
            "class goes from {} to {}, fibers are over {} and {}",
            c.source, c.target, fc.barcode_type, fc2.barcode_type
        )));
    }
    let phi = &c.representative;
    if !phi.is_simplicial() {
        return Err(Error::NotSimplicial(phi.to_string()));
    }
    let (m, m2) = (c.source.dim(), c.target.dim());
    let mut cell_map = Vec::with_capacity(fc.cells.len());
    for cell in &fc.cells {
        let positions: Vec<BlockRole> = cell
            .roles
            .iter()
            .map(|r| match *r {
                BlockRole::Pinned(e) => BlockRole::Pinned(phi.apply(e)),
                BlockRole::Free { gap, ord } => {
                    let lo = phi.apply(Endpoint::from_index(gap, m));
                    let hi = phi.apply(Endpoint::from_index(gap + 1, m));
                    if lo == hi {
                        BlockRole::Pinned(lo)
                    } else {
                        BlockRole::Free {
                            gap: lo.index(m2),
                            ord,
                        }
                    }
                }
            })
            .collect();
        let image = regroup(&cell.stratum, &positions, m2);
        let id = fc2.cell_of(&image).ok_or_else(|| {
            Error::Internal(format!(
                "image {image} of cell {} is not in the target fiber",
                cell.stratum
            ))
        })?;
        let expected: Vec<usize> = (0..=m as usize)
            .filter(|&g| {
                phi.apply(Endpoint::from_index(g, m)) != phi.apply(Endpoint::from_index(g + 1, m))
            })
            .map(|g| cell.gap_shape[g])
            .collect();
        if fc2.cells[id].gap_shape != expected {
            return Err(Error::Internal(format!(
                "cell {} maps to shape {:?}, expected {:?}",
                cell.stratum, fc2.cells[id].gap_shape, expected
            )));
        }
        cell_map.push(id);
    }
    let mut vertex_map = Vec::with_capacity(fc.vertices.len());
    for v in &fc.vertices {
        let w = fc2.vertex_of_cell(cell_map[v.cell]).ok_or_else(|| {
            Error::Internal("a vertex maps to a positive-dimensional cell".into())
        })?;
        let pushed: Vec<Endpoint> = v.rank_vector.iter().map(|&e| phi.apply(e)).collect();
        if pushed != fc2.vertices[w].rank_vector {
            return Err(Error::Internal(
                "vertex image disagrees with the pushed rank vector".into(),
            ));
        }
        vertex_map.push(w);
    }
    Ok(MonodromyRecord {
        source: c.source.clone(),
        target: c.target.clone(),
        representative: phi.clone(),
        vertex_map,
        cell_map,
        source_cell_dims: fc.cells.iter().map(|c| c.dim).collect(),
        target_cell_dims: fc2.cells.iter().map(|c| c.dim).collect(),
        collapsed_cells: Vec::new(),
        surviving_cells: Vec::new(),
    }
    .finish())
}

/// `m2 ∘ m1`.
pub fn compose_monodromies(m1: &MonodromyRecord, m2: &MonodromyRecord) -> Result<MonodromyRecord> {
    if m1.target != m2.source
        || m1.target_cell_dims.len() != m2.source_cell_dims.len()
        || m1.target_cell_dims != m2.source_cell_dims
    {
        return Err(Error::MismatchedFibers(format!(
            "first map ends over {}, second starts over {}",
            m1.target, m2.source
        )));
    }
    Ok(MonodromyRecord {
        source: m1.source.clone(),
        target: m2.target.clone(),
        representative: m1.representative.then(&m2.representative)?,
        vertex_map: m1.vertex_map.iter().map(|&v| m2.vertex_map[v]).collect(),
        cell_map: m1.cell_map.iter().map(|&c| m2.cell_map[c]).collect(),
        source_cell_dims: m1.source_cell_dims.clone(),
        target_cell_dims: m2.target_cell_dims.clone(),
        collapsed_cells: Vec::new(),
        surviving_cells: Vec::new(),
    }
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::apply_endpoint_map_to_type;
    use crate::complex::{build_complex, SimplicialComplex};
    use crate::fiber::fiber_complex;
    use crate::field::FieldSpec;
    use crate::strata::{image_records, StratumMode};
    use std::collections::{BTreeMap, BTreeSet};

    const D2: &str = "0:(1,inf),(2,3);1:(4,inf)";
    const D3_MID: &str = "0:(1,inf),(2,3);1:(3,inf)";
    const D4_LEFT: &str = "0:(1,inf);1:(2,inf)";
    const D4_RIGHT: &str = "0:(1,inf),(1,2);1:(2,inf)";
    const D0_MID: &str = "0:(1,inf),(2,4),(3,5);1:(6,inf)";
    const D5: &str = "0:(1,inf);1:(1,inf)";

    fn ty(s: &str) -> CombinatorialBarcode {
        s.parse().unwrap()
    }

    fn triangle() -> SimplicialComplex {
        build_complex(&[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    fn triangle_types() -> Vec<CombinatorialBarcode> {
        let (_, records) =
            image_records(&triangle(), StratumMode::Interior, FieldSpec::F2).unwrap();
        records.into_iter().map(|r| r.barcode_type).collect()
    }

    /// Every monotone map, unpruned, keyed by the image of each source bar.
    fn brute_force_classes(t: &CombinatorialBarcode, t2: &CombinatorialBarcode) -> usize {
        let m = t.dim() as usize;
        let m2 = t2.dim();
        let symbols = m2 as usize + 2;
        let mut keys = BTreeSet::new();
        let mut digits = vec![0usize; m];
        loop {
            if digits.windows(2).all(|w| w[0] <= w[1]) {
                let phi = EndpointMap::new(
                    m2,
                    digits
                        .iter()
                        .map(|&i| Endpoint::from_index(i, m2))
                        .collect(),
                )
                .unwrap();
                let image = apply_endpoint_map_to_type(&phi, t).unwrap();
                let surjective = (1..=m2).all(|r| digits.contains(&(r as usize)));
                if image == *t2 && surjective {
                    keys.insert(phi.push_bars(t));
                }
            }
            let mut i = 0;
            while i < m {
                digits[i] += 1;
                if digits[i] < symbols {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        keys.len()
    }

    #[test]
    fn unique_codimension_one_classes() {
        let c = enumerate_morphism_classes(&ty(D2), &ty(D3_MID));
        assert_eq!(c.len(), 1);
        assert_eq!(
            c[0].representative.rank_images(),
            &[
                Endpoint::Rank(1),
                Endpoint::Rank(2),
                Endpoint::Rank(3),
                Endpoint::Rank(3)
            ]
        );
        assert_eq!(
            enumerate_morphism_classes(&ty(D3_MID), &ty(D4_LEFT)).len(),
            1
        );
        assert_eq!(
            enumerate_morphism_classes(&ty(D3_MID), &ty(D4_RIGHT)).len(),
            1
        );
    }

    #[test]
    fn endomorphisms_are_identities() {
        for t in triangle_types() {
            let c = enumerate_morphism_classes(&t, &t);
            assert_eq!(c.len(), 1, "{t}");
            assert!(c[0].is_identity());
            assert!(decompose_codim1(&c[0]).unwrap().is_empty());
        }
    }

    #[test]
    fn class_count_matches_brute_force() {
        let (a, b) = (ty(D0_MID), ty(D5));
        let n = enumerate_morphism_classes(&a, &b).len();
        assert_eq!(n, brute_force_classes(&a, &b));
        assert!(n >= 1);
        let types = triangle_types();
        for t in types.iter().filter(|t| t.dim() == 6) {
            for t2 in types.iter().filter(|t| t.dim() <= 3) {
                assert_eq!(
                    enumerate_morphism_classes(t, t2).len(),
                    brute_force_classes(t, t2),
                    "{t} -> {t2}"
                );
            }
        }
    }

    #[test]
    fn no_morphisms_upward() {
        assert!(enumerate_morphism_classes(&ty(D5), &ty(D2)).is_empty());
        assert!(enumerate_morphism_classes(&ty(D4_LEFT), &ty(D4_RIGHT)).is_empty());
    }

    #[test]
    fn two_collapses_factor_in_two_steps() {
        let t = ty(D0_MID);
        let phi = EndpointMap::new(
            4,
            [1, 1, 2, 3, 4, 4]
                .iter()
                .map(|&r| Endpoint::Rank(r))
                .collect(),
        )
        .unwrap();
        let t2 = apply_endpoint_map_to_type(&phi, &t).unwrap();
        assert_eq!(t2, ty("0:(1,inf),(1,3),(2,4);1:(4,inf)"));
        let c = MorphismClass::of_map(&t, &t2, phi).unwrap();
        let steps = decompose_codim1(&c).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(
            compose_representatives(&steps, 6).unwrap(),
            c.representative
        );
    }

    #[test]
    fn decompositions_recompose() {
        let types = triangle_types();
        for t in &types {
            for t2 in &types {
                if t2.dim() > t.dim() {
                    continue;
                }
                for c in enumerate_morphism_classes(t, t2) {
                    let steps = decompose_codim1(&c).unwrap();
                    assert_eq!(steps.len(), (t.dim() - t2.dim()) as usize);
                    let mut matching: BarMatching = c
                        .source
                        .degrees()
                        .iter()
                        .map(|b| (0..b.len()).map(Some).collect())
                        .collect();
                    let mut cur = t.clone();
                    for s in &steps {
                        assert_eq!(s.source, cur);
                        assert_eq!(s.source.dim(), s.target.dim() + 1);
                        matching = compose_matchings(&matching, &s.matching);
                        cur = s.target.clone();
                    }
                    assert_eq!(&cur, t2);
                    assert_eq!(
                        compose_representatives(&steps, t.dim()).unwrap(),
                        c.representative
                    );
                    assert_eq!(
                        matching_images(&matching, t2),
                        c.matched_bars(),
                        "{t} -> {t2}"
                    );
                }
            }
        }
    }

    #[test]
    fn index_is_complete_in_codimension_one() {
        let types = triangle_types();
        for t in &types {
            for t2 in types.iter().filter(|t2| t2.dim() + 1 == t.dim()) {
                let classes = enumerate_morphism_classes(t, t2);
                let indices: BTreeSet<_> = classes.iter().map(|c| c.index()).collect();
                assert_eq!(indices.len(), classes.len(), "{t} -> {t2}");
            }
        }
    }

    #[test]
    fn edge_collapses_onto_codimension_one_fibers() {
        let k = triangle();
        let f2 = FieldSpec::F2;
        let mid = fiber_complex(&k, &ty(D3_MID), f2).unwrap();
        assert_eq!(mid.cells_of_dim(1).count(), 18);
        let left = fiber_complex(&k, &ty(D4_LEFT), f2).unwrap();
        let c = enumerate_morphism_classes(&ty(D3_MID), &ty(D4_LEFT));
        assert_eq!(c.len(), 1);
        let rec = monodromy_map(&mid, &left, &c[0]).unwrap();
        assert_eq!(rec.collapsed_of_dim(1), 12);
        // the six surviving edges form a hexagon inside the band
        let images: BTreeSet<usize> = mid
            .cells_of_dim(1)
            .filter(|c| !rec.collapsed_cells.contains(c))
            .map(|c| rec.cell_map[c])
            .collect();
        assert_eq!(images.len(), 6);

        // merging the two component births collapses the gap holding one edge
        // of each colour, so six edges collapse and twelve cover the hexagon twice
        let hex = fiber_complex(&k, &ty(D4_RIGHT), f2).unwrap();
        let c = enumerate_morphism_classes(&ty(D3_MID), &ty(D4_RIGHT));
        assert_eq!(c.len(), 1);
        let rec = monodromy_map(&mid, &hex, &c[0]).unwrap();
        assert_eq!(rec.collapsed_of_dim(1), 6);
        let mut hits: BTreeMap<usize, usize> = BTreeMap::new();
        for e in mid
            .cells_of_dim(1)
            .filter(|c| !rec.collapsed_cells.contains(c))
        {
            *hits.entry(rec.cell_map[e]).or_default() += 1;
        }
        assert_eq!(
            hits.keys().copied().collect::<Vec<_>>(),
            hex.cells_of_dim(1).collect::<Vec<_>>()
        );
        assert!(hits.values().all(|&n| n == 2));
    }

    #[test]
    fn identity_monodromy() {
        let k = triangle();
        let fc = fiber_complex(&k, &ty(D2), FieldSpec::F2).unwrap();
        let id = &enumerate_morphism_classes(&ty(D2), &ty(D2))[0];
        let rec = monodromy_map(&fc, &fc, id).unwrap();
        assert_eq!(rec.cell_map, (0..fc.cells.len()).collect::<Vec<_>>());
        assert_eq!(rec.vertex_map, (0..fc.vertices.len()).collect::<Vec<_>>());
        assert!(rec.collapsed_cells.is_empty());
        let c = enumerate_morphism_classes(&ty(D2), &ty(D3_MID)).remove(0);
        let fc2 = fiber_complex(&k, &ty(D3_MID), FieldSpec::F2).unwrap();
        let m = monodromy_map(&fc, &fc2, &c).unwrap();
        assert_eq!(compose_monodromies(&rec, &m).unwrap(), m);
        assert!(compose_monodromies(&m, &rec).is_err());
    }

    #[test]
    fn composition_matches_direct_class() {
        let k = triangle();
        let f2 = FieldSpec::F2;
        let fibers: Vec<FiberComplex> = [D2, D3_MID, D4_LEFT]
            .iter()
            .map(|t| fiber_complex(&k, &ty(t), f2).unwrap())
            .collect();
        let a = enumerate_morphism_classes(&ty(D2), &ty(D3_MID)).remove(0);
        let b = enumerate_morphism_classes(&ty(D3_MID), &ty(D4_LEFT)).remove(0);
        let ma = monodromy_map(&fibers[0], &fibers[1], &a).unwrap();
        let mb = monodromy_map(&fibers[1], &fibers[2], &b).unwrap();
        let composed = compose_monodromies(&ma, &mb).unwrap();
        // the composite is a morphism in the direct class, though not its
        // lexicographically smallest representative
        let composite =
            MorphismClass::of_map(&ty(D2), &ty(D4_LEFT), composed.representative.clone()).unwrap();
        let direct = enumerate_morphism_classes(&ty(D2), &ty(D4_LEFT));
        assert_eq!(direct.len(), 1);
        assert_eq!(composite.matched_bars(), direct[0].matched_bars());
        let mc = monodromy_map(&fibers[0], &fibers[2], &composite).unwrap();
        assert_eq!(composed.vertex_map, mc.vertex_map);
        assert_eq!(composed.cell_map, mc.cell_map);
        // and it is homotopic to the direct one: images of each vertex share a cell
        let md = monodromy_map(&fibers[0], &fibers[2], &direct[0]).unwrap();
        for v in 0..fibers[0].vertices.len() {
            let (x, y) = (composed.vertex_map[v], md.vertex_map[v]);
            assert!(fibers[2]
                .cells
                .iter()
                .any(|c| c.vertices.contains(&x) && c.vertices.contains(&y)));
        }
    }

    #[test]
    fn factorized_monodromies_recompose() {
        let k = triangle();
        let f2 = FieldSpec::F2;
        let t = ty(D2);
        let fc = fiber_complex(&k, &t, f2).unwrap();
        for t2 in triangle_types().into_iter().filter(|t2| t2.dim() < t.dim()) {
            let classes = enumerate_morphism_classes(&t, &t2);
            if classes.is_empty() {
                continue;
            }
            let fc2 = fiber_complex(&k, &t2, f2).unwrap();
            for c in classes {
                let direct = monodromy_map(&fc, &fc2, &c).unwrap();
                let mut acc: Option<MonodromyRecord> = None;
                let mut from = fc.clone();
                for s in decompose_codim1(&c).unwrap() {
                    let to = fiber_complex(&k, &s.target, f2).unwrap();
                    let step = monodromy_map(&from, &to, &s).unwrap();
                    acc = Some(match acc {
                        None => step,
                        Some(prev) => compose_monodromies(&prev, &step).unwrap(),
                    });
                    from = to;
                }
                let acc = acc.unwrap();
                assert_eq!(acc.vertex_map, direct.vertex_map);
                assert_eq!(acc.cell_map, direct.cell_map);
            }
        }
    }

    #[test]
    fn non_simplicial_maps_are_rejected() {
        let t = ty(D2);
        let gap =
            EndpointMap::new(5, [1, 2, 3, 5].iter().map(|&r| Endpoint::Rank(r)).collect()).unwrap();
        let t2 = apply_endpoint_map_to_type(&gap, &t).unwrap();
        assert!(MorphismClass::of_map(&t, &t2, gap).is_err());
    }
}
