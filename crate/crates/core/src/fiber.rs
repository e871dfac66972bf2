//! Fibers of the persistence map as polyhedral complexes whose cells are
//! products of simplices, and their staircase triangulations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barcode::{CombinatorialBarcode, Endpoint};
use crate::complex::{build_complex, SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::persistence::{
    betti_numbers, persistence_by_levels, ratio, ColumnReducer, Filter, Pairing,
};
use crate::strata::{mask_to_ids, raw_block_symbols, BarcodeStratumRecord, FilterStratum, Masks};

/// Which filters a fiber is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberMode {
    All,
    LowerStar,
}

/// Persistence event produced by a block: a class born there that outlives
/// it, or the death of a class born at an earlier symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Event {
    Birth(usize),
    Death(usize, Endpoint),
}

fn target_events(t: &CombinatorialBarcode) -> Vec<Vec<Event>> {
    let m = t.dim();
    let mut out = vec![Vec::new(); m as usize + 2];
    for (p, bars) in t.degrees().iter().enumerate() {
        for b in bars {
            out[b.birth.index(m)].push(Event::Birth(p));
            if b.death != Endpoint::Inf {
                out[b.death.index(m)].push(Event::Death(p, b.birth));
            }
        }
    }
    for e in &mut out {
        e.sort();
    }
    out
}

struct Search<'a> {
    k: &'a SimplicialComplex,
    masks: &'a Masks,
    mode: FiberMode,
    target: Vec<Vec<Event>>,
    m: usize,
    reducer: ColumnReducer,
    /// block index of each filtration position
    block_at: Vec<usize>,
    /// symbol of each block; `None` for free blocks
    symbols: Vec<Option<Endpoint>>,
    blocks: Vec<u64>,
    at_zero: bool,
    out: Vec<FilterStratum>,
}

impl<'a> Search<'a> {
    fn new(
        k: &'a SimplicialComplex,
        masks: &'a Masks,
        t: &CombinatorialBarcode,
        mode: FiberMode,
        field: FieldSpec,
    ) -> Self {
        Search {
            k,
            masks,
            mode,
            target: target_events(t),
            m: t.dim() as usize,
            reducer: ColumnReducer::new(k, field),
            block_at: Vec::new(),
            symbols: Vec::new(),
            blocks: Vec::new(),
            at_zero: false,
            out: Vec::new(),
        }
    }

    fn one(&self) -> &[Event] {
        &self.target[self.m + 1]
    }

    fn emit(&mut self, at_one: bool) {
        let blocks = self.blocks.iter().map(|&b| mask_to_ids(b)).collect();
        self.out.push(
            FilterStratum::new(self.k, blocks, self.at_zero, at_one)
                .expect("search only builds monotone partitions"),
        );
    }

    /// Appends `block`, returning its events, or `None` if it violates the
    /// lower-star restriction.
    fn push_block(&mut self, block: u64) -> Option<Vec<Event>> {
        let ids = mask_to_ids(block);
        if self.mode == FiberMode::LowerStar {
            let ok = ids.iter().all(|&s| {
                self.k.simplex(s).dim() == 0
                    || self.k.vertex_ids(s).iter().any(|v| block >> v & 1 == 1)
            });
            if !ok {
                return None;
            }
        }
        let current = self.blocks.len();
        let start = self.reducer.len();
        let mut events = Vec::new();
        for &s in &ids {
            let pos = self.reducer.len();
            self.block_at.push(current);
            if let Pairing::Death(q) = self.reducer.push(self.k, s) {
                if self.block_at[q] < current {
                    let sym =
                        self.symbols[self.block_at[q]].expect("births happen at pinned blocks");
                    events.push(Event::Death(self.k.simplex(s).dim() - 1, sym));
                }
            }
            debug_assert_eq!(pos + 1, self.reducer.len());
        }
        for pos in start..self.reducer.len() {
            if self.reducer.pairing(pos) == Pairing::Birth && !self.reducer.is_killed(pos) {
                events.push(Event::Birth(
                    self.k.simplex(self.reducer.simplex_at(pos)).dim(),
                ));
            }
        }
        self.blocks.push(block);
        events.sort();
        Some(events)
    }

    fn pop_block(&mut self) {
        let block = self.blocks.pop().expect("pop on empty search");
        for _ in 0..block.count_ones() {
            self.reducer.pop();
            self.block_at.pop();
        }
    }

    /// Explores every continuation after `block` has been chosen next.
    fn step(&mut self, placed: u64, block: u64, rank: usize) {
        let Some(events) = self.push_block(block) else {
            return;
        };
        let first = self.blocks.len() == 1;
        let placed = placed | block;
        let done = placed == self.masks.full;
        let zero_needed = !self.target[0].is_empty();
        if first && zero_needed && events != self.target[0] {
            self.pop_block();
            return;
        }
        let mut moves: Vec<(Option<Endpoint>, usize, bool)> = Vec::new();
        if first && events == self.target[0] {
            moves.push((Some(Endpoint::Zero), rank, true));
        }
        if !(first && zero_needed) {
            if events.is_empty() {
                moves.push((None, rank, false));
            } else if rank < self.m && events == self.target[rank + 1] {
                moves.push((Some(Endpoint::Rank(rank as u32 + 1)), rank + 1, false));
            }
        }
        for (sym, next_rank, zero) in moves {
            self.symbols.push(sym);
            if zero {
                self.at_zero = true;
            }
            if done {
                if next_rank == self.m && self.one().is_empty() {
                    self.emit(false);
                }
            } else {
                self.descend(placed, next_rank);
            }
            if zero {
                self.at_zero = false;
            }
            self.symbols.pop();
        }
        // the last block may sit at 1; a zero block, if required, came earlier
        if done && rank == self.m && events == self.one() && (!zero_needed || self.at_zero) {
            self.emit(true);
        }
        self.pop_block();
    }

    fn descend(&mut self, placed: u64, rank: usize) {
        let mut choices = Vec::new();
        self.masks.for_each_block(placed, &mut |b| choices.push(b));
        for b in choices {
            self.step(placed, b, rank);
        }
    }
}

/// All filter strata (with every flag combination) whose barcode type is `t`,
/// found by a search that prunes partial partitions as soon as their
/// persistence events disagree with `t`.
pub fn strata_over_type(
    k: &SimplicialComplex,
    t: &CombinatorialBarcode,
    field: FieldSpec,
    mode: FiberMode,
) -> Result<Vec<FilterStratum>> {
    let masks = Masks::new(k)?;
    let mut firsts = Vec::new();
    masks.for_each_block(0, &mut |b| firsts.push(b));
    let mut out: Vec<FilterStratum> = firsts
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut search = Search::new(k, &masks, t, mode, field);
            search.step(0, b, 0);
            search.out
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Role of a block inside a fiber cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockRole {
    /// The block's value is the given endpoint symbol.
    Pinned(Endpoint),
    /// The block moves freely inside gap `gap` (between symbol `gap` and
    /// `gap + 1` of `Zero, 1, …, m, One`); `ord` is its position in the gap.
    Free { gap: usize, ord: usize },
}

impl BlockRole {
    fn sort_key(self, m: u32) -> (usize, usize) {
        match self {
            BlockRole::Pinned(e) => (2 * e.index(m), 0),
            BlockRole::Free { gap, ord } => (2 * gap + 1, ord),
        }
    }
}

/// Roles of the blocks of `st`, a stratum over a type of dimension `m`.
pub(crate) fn block_roles(
    k: &SimplicialComplex,
    st: &FilterStratum,
    field: FieldSpec,
    m: u32,
) -> Vec<BlockRole> {
    let mut order = Vec::with_capacity(k.simplex_count());
    let mut levels = Vec::with_capacity(k.simplex_count());
    for (i, b) in st.blocks().iter().enumerate() {
        order.extend_from_slice(b);
        levels.extend(std::iter::repeat_n(i, b.len()));
    }
    let mut used = BTreeSet::new();
    for bars in persistence_by_levels(k, &order, &levels, field) {
        for (b, d) in bars {
            used.insert(b);
            used.extend(d);
        }
    }
    let raw = raw_block_symbols(st);
    let mut rank = 0usize;
    let mut ord = 0usize;
    raw.iter()
        .enumerate()
        .map(|(i, sym)| match sym {
            Endpoint::Zero => BlockRole::Pinned(Endpoint::Zero),
            Endpoint::One => BlockRole::Pinned(Endpoint::One),
            _ if used.contains(&i) => {
                rank += 1;
                ord = 0;
                BlockRole::Pinned(Endpoint::Rank(rank as u32))
            }
            _ => {
                ord += 1;
                BlockRole::Free {
                    gap: rank,
                    ord: ord - 1,
                }
            }
        })
        .inspect(|r| debug_assert!(r.sort_key(m).0 <= 2 * m as usize + 2))
        .collect()
}

/// Stratum obtained by moving each block of `st` to a new position; blocks
/// sharing a position merge, pinned `Zero`/`One` positions set the flags.
pub(crate) fn regroup(st: &FilterStratum, positions: &[BlockRole], m: u32) -> FilterStratum {
    let mut groups: BTreeMap<(usize, usize), (BlockRole, Vec<SimplexId>)> = BTreeMap::new();
    for (b, pos) in st.blocks().iter().zip(positions) {
        groups
            .entry(pos.sort_key(m))
            .or_insert_with(|| (*pos, Vec::new()))
            .1
            .extend_from_slice(b);
    }
    let at_zero = groups
        .values()
        .any(|(r, _)| *r == BlockRole::Pinned(Endpoint::Zero));
    let at_one = groups
        .values()
        .any(|(r, _)| *r == BlockRole::Pinned(Endpoint::One));
    let blocks: Vec<Vec<SimplexId>> = groups
        .into_values()
        .map(|(_, mut b)| {
            b.sort_unstable();
            b
        })
        .collect();
    FilterStratum::from_parts(blocks, at_zero, at_one)
}

/// A cell of a fiber: one filter stratum, affinely a product of simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCell {
    pub stratum: FilterStratum,
    pub dim: usize,
    /// Free blocks per gap, `m + 1` entries.
    pub gap_shape: Vec<usize>,
    pub roles: Vec<BlockRole>,
    /// Fiber vertices (0-cells) in the closure of this cell.
    pub vertices: Vec<usize>,
}

/// Vertex of a fiber: a filter all of whose blocks are pinned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberVertex {
    pub cell: usize,
    /// Endpoint symbol taken by each simplex.
    pub rank_vector: Vec<Endpoint>,
}

/// The fiber over a barcode type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberComplex {
    pub barcode_type: CombinatorialBarcode,
    pub mode: FiberMode,
    pub cells: Vec<FiberCell>,
    /// Covering pairs `(face, cell)` of the face poset.
    pub face_relation: Vec<(usize, usize)>,
    pub vertices: Vec<FiberVertex>,
    index: HashMap<FilterStratum, usize>,
    vertex_of_cell: HashMap<usize, usize>,
}

impl FiberComplex {
    pub fn cell_of(&self, st: &FilterStratum) -> Option<usize> {
        self.index.get(st).copied()
    }

    /// Vertex id of a 0-cell.
    pub fn vertex_of_cell(&self, cell: usize) -> Option<usize> {
        self.vertex_of_cell.get(&cell).copied()
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(move |&c| self.cells[c].dim == d)
    }

    /// Alternating count of cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.dim % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Cells with no cofaces.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut has_coface = vec![false; self.cells.len()];
        for &(f, _) in &self.face_relation {
            has_coface[f] = true;
        }
        (0..self.cells.len()).filter(|&c| !has_coface[c]).collect()
    }

    /// Connected component id of every cell.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.cells.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.face_relation {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut ids = HashMap::new();
        (0..self.cells.len())
            .map(|c| {
                let r = find(&mut parent, c);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect()
    }
}

/// Builds the fiber over `t` with all flag combinations.
pub fn fiber_complex(
    k: &SimplicialComplex,
    t: &CombinatorialBarcode,
    field: FieldSpec,
) -> Result<FiberComplex> {
    fiber_complex_with_mode(k, t, field, FiberMode::All)
}

/// Builds the fiber over `t`, optionally restricted to lower-star filters.
pub fn fiber_complex_with_mode(
    k: &SimplicialComplex,
    t: &CombinatorialBarcode,
    field: FieldSpec,
    mode: FiberMode,
) -> Result<FiberComplex> {
    let strata = strata_over_type(k, t, field, mode)?;
    if strata.is_empty() {
        return Err(Error::EmptyFiber(t.to_string()));
    }
    let m = t.dim();
    let index: HashMap<FilterStratum, usize> = strata
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut cells: Vec<FiberCell> = strata
        .into_par_iter()
        .map(|st| {
            let roles = block_roles(k, &st, field, m);
            let mut gap_shape = vec![0; m as usize + 1];
            for r in &roles {
                if let BlockRole::Free { gap, .. } = r {
                    gap_shape[*gap] += 1;
                }
            }
            let dim = gap_shape.iter().sum();
            debug_assert_eq!(dim, st.interior_dim() - m as usize);
            FiberCell {
                stratum: st,
                dim,
                gap_shape,
                roles,
                vertices: Vec::new(),
            }
        })
        .collect();
    let lookup = |st: &FilterStratum| {
        index.get(st).copied().ok_or_else(|| {
            Error::Internal(format!(
                "face {st} of a fiber cell is not in the fiber over {t}"
            ))
        })
    };

    let mut vertex_cells: Vec<usize> = (0..cells.len()).filter(|&c| cells[c].dim == 0).collect();
    vertex_cells.sort_unstable();
    let vertex_of_cell: HashMap<usize, usize> = vertex_cells
        .iter()
        .enumerate()
        .map(|(v, &c)| (c, v))
        .collect();
    let vertices: Vec<FiberVertex> = vertex_cells
        .iter()
        .map(|&c| {
            let cell = &cells[c];
            let mut rank_vector = vec![Endpoint::Zero; k.simplex_count()];
            for (b, role) in cell.stratum.blocks().iter().zip(&cell.roles) {
                let BlockRole::Pinned(e) = role else {
                    unreachable!("0-cells have no free blocks")
                };
                for &s in b {
                    rank_vector[s] = *e;
                }
            }
            FiberVertex {
                cell: c,
                rank_vector,
            }
        })
        .collect();

    let mut face_relation = Vec::new();
    for c in 0..cells.len() {
        let splits = split_vectors(&cells[c].gap_shape);
        let mut vs = Vec::with_capacity(splits.len());
        for s in &splits {
            let st = split_stratum(&cells[c], s, m);
            let vc = lookup(&st)?;
            vs.push(vertex_of_cell[&vc]);
        }
        vs.sort_unstable();
        vs.dedup();
        if vs.len() != splits.len() {
            return Err(Error::Internal(format!("cell {c} has coincident vertices")));
        }
        cells[c].vertices = vs;
        for face in covering_faces(&cells[c], m) {
            let f = lookup(&face)?;
            if cells[f].dim + 1 != cells[c].dim {
                return Err(Error::Internal(format!(
                    "face relation not graded at cell {c}"
                )));
            }
            face_relation.push((f, c));
        }
    }
    face_relation.sort_unstable();
    face_relation.dedup();
    Ok(FiberComplex {
        barcode_type: t.clone(),
        mode,
        cells,
        face_relation,
        vertices,
        index,
        vertex_of_cell,
    })
}

/// Every vector `(j_0,…,j_m)` with `0 ≤ j_i ≤ k_i`.
fn split_vectors(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(shape.len())];
    for &k in shape {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=k).map(move |j| {
                    let mut w = v.clone();
                    w.push(j);
                    w
                })
            })
            .collect();
    }
    out
}

/// The 0-face of a cell where, in gap `i`, the first `split[i]` free blocks
/// merge down into the lower delimiter and the rest merge up.
fn split_stratum(cell: &FiberCell, split: &[usize], m: u32) -> FilterStratum {
    let positions: Vec<BlockRole> = cell
        .roles
        .iter()
        .map(|r| match *r {
            BlockRole::Free { gap, ord } if ord < split[gap] => {
                BlockRole::Pinned(Endpoint::from_index(gap, m))
            }
            BlockRole::Free { gap, .. } => BlockRole::Pinned(Endpoint::from_index(gap + 1, m)),
            pinned => pinned,
        })
        .collect();
    regroup(&cell.stratum, &positions, m)
}

/// Codimension-one faces: one free block merges with a neighbour in its gap
/// or with the delimiter bounding the gap.
fn covering_faces(cell: &FiberCell, m: u32) -> Vec<FilterStratum> {
    let mut out = Vec::new();
    for (i, role) in cell.roles.iter().enumerate() {
        let BlockRole::Free { gap, ord } = *role else {
            continue;
        };
        let size = cell.gap_shape[gap];
        let mut targets = Vec::new();
        if ord == 0 {
            targets.push(BlockRole::Pinned(Endpoint::from_index(gap, m)));
        }
        if ord + 1 == size {
            targets.push(BlockRole::Pinned(Endpoint::from_index(gap + 1, m)));
        } else {
            targets.push(BlockRole::Free { gap, ord: ord + 1 });
        }
        for target in targets {
            let mut positions = cell.roles.clone();
            positions[i] = target;
            out.push(regroup(&cell.stratum, &positions, m));
        }
    }
    out
}

/// Largest cell dimension.
pub fn fiber_dimension(fc: &FiberComplex) -> usize {
    fc.cells.iter().map(|c| c.dim).max().unwrap_or(0)
}

/// Filters realizing the vertices, with `Rank(i)` sent to `i/(m+1)`.
pub fn fiber_vertices(k: &SimplicialComplex, fc: &FiberComplex) -> Vec<Filter> {
    let m = fc.barcode_type.dim() as i64;
    fc.vertices
        .iter()
        .map(|v| {
            let values: Vec<BigRational> = v
                .rank_vector
                .iter()
                .map(|e| match e {
                    Endpoint::Zero => ratio(0, 1),
                    Endpoint::One => ratio(1, 1),
                    Endpoint::Rank(r) => ratio(*r as i64, m + 1),
                    Endpoint::Inf => unreachable!("rank vectors are finite"),
                })
                .collect();
            Filter::new(k, values).expect("fiber vertices are filters")
        })
        .collect()
}

/// Staircase triangulation of a fiber.
#[derive(Debug, Clone)]
pub struct TriangulatedFiber {
    /// Rank vectors of the fiber vertices; vertex `i` of `complex` is vertex `i` here.
    pub vertices: Vec<Vec<Endpoint>>,
    /// Maximal simplices as sorted vertex lists, each with the cell it lies in.
    pub maximal_simplices: Vec<(Vec<usize>, usize)>,
    pub complex: SimplicialComplex,
}

impl TriangulatedFiber {
    pub fn dimension(&self) -> usize {
        self.complex.dimension()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex
            .simplices()
            .iter()
            .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
            .sum()
    }
}

/// Maximal chains of split vectors: lattice paths from `0` to `shape`.
fn staircase_chains(shape: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn walk(
        shape: &[usize],
        cur: &mut Vec<usize>,
        path: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if cur.as_slice() == shape {
            out.push(path.clone());
            return;
        }
        for i in 0..shape.len() {
            if cur[i] < shape[i] {
                cur[i] += 1;
                path.push(cur.clone());
                walk(shape, cur, path, out);
                path.pop();
                cur[i] -= 1;
            }
        }
    }
    let mut cur = vec![0; shape.len()];
    let mut path = vec![cur.clone()];
    let mut out = Vec::new();
    walk(shape, &mut cur, &mut path, &mut out);
    out
}

/// Triangulates each cell by the chains of its vertex poset (product of
/// chains of split indices) and glues the pieces along shared faces.
pub fn triangulate_fiber(fc: &FiberComplex) -> Result<TriangulatedFiber> {
    let m = fc.barcode_type.dim();
    let mut owner: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut generators = Vec::new();
    let mut order: Vec<usize> = (0..fc.cells.len()).collect();
    order.sort_by_key(|&c| (fc.cells[c].dim, c));
    for c in order {
        let cell = &fc.cells[c];
        for chain in staircase_chains(&cell.gap_shape) {
            let mut simplex: Vec<usize> = chain
                .iter()
                .map(|s| {
                    let st = split_stratum(cell, s, m);
                    let vc = fc
                        .cell_of(&st)
                        .expect("vertices were resolved at construction");
                    fc.vertex_of_cell(vc).expect("0-cell")
                })
                .collect();
            simplex.sort_unstable();
            if !owner.contains_key(&simplex) {
                owner.insert(simplex.clone(), c);
                generators.push(simplex.iter().map(|&v| v as u32).collect::<Vec<u32>>());
            }
        }
    }
    let complex = build_complex(&generators)?;
    let maximal_simplices = complex
        .maximal_simplices()
        .into_iter()
        .map(|s| {
            let vs: Vec<usize> = s.vertices().iter().map(|&v| v as usize).collect();
            let c = owner[&vs];
            (vs, c)
        })
        .collect();
    let tf = TriangulatedFiber {
        vertices: fc.vertices.iter().map(|v| v.rank_vector.clone()).collect(),
        maximal_simplices,
        complex,
    };
    if tf.complex.vertices().len() != fc.vertices.len() {
        return Err(Error::Internal("triangulation lost a vertex".into()));
    }
    if tf.euler_characteristic() != fc.euler_characteristic() {
        return Err(Error::Internal(format!(
            "Euler characteristic mismatch: triangulation {} vs cells {}",
            tf.euler_characteristic(),
            fc.euler_characteristic()
        )));
    }
    Ok(tf)
}

/// Betti numbers of the triangulated fiber, one per degree up to its dimension.
pub fn fiber_homology(tf: &TriangulatedFiber, field: FieldSpec) -> Vec<usize> {
    betti_numbers(&tf.complex, field)
}

/// Number of connected components of the boundary (edges in exactly one
/// triangle) of a pure 2-dimensional triangulation.
pub fn boundary_circuits(tf: &TriangulatedFiber) -> Result<usize> {
    let k = &tf.complex;
    if k.dimension() != 2 || k.maximal_simplices().iter().any(|s| s.dim() != 2) {
        return Err(Error::NotTwoDimensional(format!(
            "triangulation has dimension {} and {} maximal simplices",
            k.dimension(),
            k.maximal_simplices().len()
        )));
    }
    let boundary: Vec<SimplexId> = k
        .simplices_of_dim(1)
        .filter(|&e| k.cofacets(e).len() == 1)
        .collect();
    let mut parent: HashMap<SimplexId, SimplexId> = HashMap::new();
    fn find(p: &mut HashMap<SimplexId, SimplexId>, x: SimplexId) -> SimplexId {
        let up = *p.entry(x).or_insert(x);
        if up == x {
            x
        } else {
            let r = find(p, up);
            p.insert(x, r);
            r
        }
    }
    for &e in &boundary {
        let f = k.facets(e);
        let (a, b) = (find(&mut parent, f[0]), find(&mut parent, f[1]));
        if a != b {
            parent.insert(a, b);
        }
    }
    let roots: BTreeSet<SimplexId> = boundary
        .iter()
        .map(|&e| {
            let v = k.facets(e)[0];
            find(&mut parent, v)
        })
        .collect();
    Ok(roots.len())
}

/// One line of a dimension-bound sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub barcode_type: CombinatorialBarcode,
    pub fiber_dimension: usize,
    pub bounded_deficit_twice: usize,
    pub codim: usize,
    pub within_bound: bool,
    pub tight: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub all_pass: bool,
}

/// Checks `fiber dimension ≤ bounded deficit ≤ codim` for every record.
pub fn check_dimension_bound(
    k: &SimplicialComplex,
    records: &[BarcodeStratumRecord],
    field: FieldSpec,
) -> Result<BoundReport> {
    let rows: Vec<BoundRow> = records
        .par_iter()
        .map(|r| {
            let fc = fiber_complex(k, &r.barcode_type, field)?;
            let d = fiber_dimension(&fc);
            Ok(BoundRow {
                barcode_type: r.barcode_type.clone(),
                fiber_dimension: d,
                bounded_deficit_twice: r.bounded_deficit_twice,
                codim: r.codim,
                within_bound: 2 * d <= r.bounded_deficit_twice
                    && r.bounded_deficit_twice <= 2 * r.codim,
                tight: 2 * d == r.bounded_deficit_twice,
            })
        })
        .collect::<Result<_>>()?;
    let all_pass = rows.iter().all(|r| r.within_bound);
    Ok(BoundReport { rows, all_pass })
}

/// Rank vector rendered as `zero,1,2,one`.
pub fn rank_vector_label(v: &[Endpoint]) -> String {
    v.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The 1-skeleton of a fiber as an undirected DOT graph.
pub fn emit_dot(fc: &FiberComplex) -> String {
    let mut out = String::new();
    let d = fiber_dimension(fc);
    if d > 1 {
        let _ = writeln!(
            out,
            "// warning: fiber has dimension {d}; only the 1-skeleton is drawn"
        );
    }
    let _ = writeln!(out, "graph fiber {{");
    let _ = writeln!(out, "  label=\"{}\";", fc.barcode_type);
    for (i, v) in fc.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{i} [label=\"({})\"];",
            rank_vector_label(&v.rank_vector)
        );
    }
    for c in fc.cells_of_dim(1) {
        let vs = &fc.cells[c].vertices;
        let _ = writeln!(out, "  v{} -- v{};", vs[0], vs[1]);
    }
    out.push_str("}\n");
    out
}
