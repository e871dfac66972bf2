//! Filter strata (monotone ordered set partitions of the simplices) and their
//! grouping into barcode strata.

use std::collections::HashMap;
use std::fmt;

use num::{BigRational, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barcode::{Bar, CombinatorialBarcode, Endpoint};
use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::persistence::{persistence_by_levels, ratio, Filter};

/// Largest complex handled by the bitmask enumerations.
pub const MAX_SIMPLICES: usize = 64;

/// One stratum of the space of filters: the simplices grouped by equal value,
/// blocks listed by increasing value. `at_zero` pins the first block to 0 and
/// `at_one` pins the last block to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FilterStratum {
    blocks: Vec<Vec<SimplexId>>,
    at_zero: bool,
    at_one: bool,
}

impl FilterStratum {
    /// Validates disjointness, coverage, monotonicity and flag legality.
    pub fn new(
        k: &SimplicialComplex,
        mut blocks: Vec<Vec<SimplexId>>,
        at_zero: bool,
        at_one: bool,
    ) -> Result<Self> {
        let n = k.simplex_count();
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in blocks.iter_mut().enumerate() {
            if b.is_empty() {
                return Err(Error::NotAFilter("empty block".into()));
            }
            b.sort_unstable();
            for &s in b.iter() {
                if s >= n || block_of[s] != usize::MAX {
                    return Err(Error::NotAFilter(format!(
                        "simplex id {s} repeated or out of range"
                    )));
                }
                block_of[s] = i;
            }
        }
        if let Some(s) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::NotAFilter(format!(
                "simplex {} is in no block",
                k.simplex(s)
            )));
        }
        for s in 0..n {
            for &f in k.facets(s) {
                if block_of[f] > block_of[s] {
                    return Err(Error::NotAFilter(format!(
                        "face {} comes after {}",
                        k.simplex(f),
                        k.simplex(s)
                    )));
                }
            }
        }
        if blocks.len() == 1 && at_zero && at_one {
            return Err(Error::NotAFilter(
                "a single block cannot sit at both 0 and 1".into(),
            ));
        }
        Ok(FilterStratum {
            blocks,
            at_zero,
            at_one,
        })
    }

    /// Builds a stratum from blocks known to be valid.
    pub(crate) fn from_parts(blocks: Vec<Vec<SimplexId>>, at_zero: bool, at_one: bool) -> Self {
        FilterStratum::new_unchecked(blocks, at_zero, at_one)
    }

    fn new_unchecked(blocks: Vec<Vec<SimplexId>>, at_zero: bool, at_one: bool) -> Self {
        FilterStratum {
            blocks,
            at_zero,
            at_one,
        }
    }

    /// The stratum containing a filter.
    pub fn of_filter(k: &SimplicialComplex, f: &Filter) -> Self {
        let order = f.filtration_order();
        let mut blocks: Vec<Vec<SimplexId>> = Vec::new();
        let mut last: Option<&BigRational> = None;
        for &id in &order {
            if last != Some(f.value(id)) {
                blocks.push(Vec::new());
                last = Some(f.value(id));
            }
            blocks.last_mut().unwrap().push(id);
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        let at_zero = f.value(order[0]).is_zero();
        let at_one = f.value(*order.last().unwrap()).is_one() && !(blocks.len() == 1 && at_zero);
        debug_assert!(k.simplex_count() == order.len());
        FilterStratum::new_unchecked(blocks, at_zero, at_one)
    }

    pub fn blocks(&self) -> &[Vec<SimplexId>] {
        &self.blocks
    }

    pub fn at_zero(&self) -> bool {
        self.at_zero
    }

    pub fn at_one(&self) -> bool {
        self.at_one
    }

    /// Number of blocks whose value is free to move in `(0,1)`.
    pub fn interior_dim(&self) -> usize {
        self.blocks.len() - usize::from(self.at_zero) - usize::from(self.at_one)
    }

    /// Block index of every simplex.
    pub fn block_of(&self) -> Vec<usize> {
        let n: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut out = vec![0; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &s in b {
                out[s] = i;
            }
        }
        out
    }

    /// Interior position (0-based) of each block; `None` for pinned blocks.
    fn interior_index(&self, block: usize) -> Option<usize> {
        if self.at_zero && block == 0 || self.at_one && block + 1 == self.blocks.len() {
            None
        } else {
            Some(block - usize::from(self.at_zero))
        }
    }

    /// A filter in this stratum whose blocks take the given interior values,
    /// which must be strictly increasing in `(0,1)`.
    pub fn filter_with_values(
        &self,
        k: &SimplicialComplex,
        interior: &[BigRational],
    ) -> Result<Filter> {
        if interior.len() != self.interior_dim() {
            return Err(Error::NotAFilter(format!(
                "stratum has {} interior blocks, got {} values",
                self.interior_dim(),
                interior.len()
            )));
        }
        let zero = BigRational::zero();
        let one = BigRational::one();
        if interior.windows(2).any(|w| w[0] >= w[1])
            || interior.first().is_some_and(|v| *v <= zero)
            || interior.last().is_some_and(|v| *v >= one)
        {
            return Err(Error::NotAFilter(
                "interior values must increase strictly inside (0,1)".into(),
            ));
        }
        let mut values = vec![zero.clone(); k.simplex_count()];
        for (i, b) in self.blocks.iter().enumerate() {
            let v = match self.interior_index(i) {
                Some(j) => interior[j].clone(),
                None if self.at_zero && i == 0 => zero.clone(),
                None => one.clone(),
            };
            for &s in b {
                values[s] = v.clone();
            }
        }
        Filter::new(k, values)
    }

    /// Image under a simplex permutation `s`: the block of `s(σ)` is the block of `σ`.
    pub fn permute(&self, simplex_map: &[SimplexId]) -> FilterStratum {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<SimplexId> = b.iter().map(|&s| simplex_map[s]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        FilterStratum::new_unchecked(blocks, self.at_zero, self.at_one)
    }

    /// Whether the filters of this stratum are lower-star: every simplex sits
    /// in the block of its latest vertex.
    pub fn is_lower_star(&self, k: &SimplicialComplex) -> bool {
        let block_of = self.block_of();
        (0..k.simplex_count()).all(|s| {
            let top = k
                .vertex_ids(s)
                .into_iter()
                .map(|v| block_of[v])
                .max()
                .unwrap();
            block_of[s] == top
        })
    }
}

impl fmt::Display for FilterStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at_zero {
            write!(f, "0=")?;
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let ids: Vec<String> = b.iter().map(|s| s.to_string()).collect();
            write!(f, "{{{}}}", ids.join(","))?;
        }
        if self.at_one {
            write!(f, "=1")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct StratumDoc {
    blocks: Vec<Vec<SimplexId>>,
    at_zero: bool,
    at_one: bool,
    interior_dim: usize,
}

impl Serialize for FilterStratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StratumDoc {
            blocks: self.blocks.clone(),
            at_zero: self.at_zero,
            at_one: self.at_one,
            interior_dim: self.interior_dim(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FilterStratum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = StratumDoc::deserialize(d)?;
        let st = FilterStratum::new_unchecked(doc.blocks, doc.at_zero, doc.at_one);
        if st.blocks.iter().any(|b| b.is_empty()) || st.interior_dim() != doc.interior_dim {
            return Err(serde::de::Error::custom("inconsistent stratum"));
        }
        Ok(st)
    }
}

/// Which strata [`enumerate_filter_strata`] lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StratumMode {
    /// Every flag combination.
    All,
    /// Strata with no block pinned at 0 or 1.
    Interior,
    /// Every flag combination, restricted to lower-star filters.
    LowerStar,
}

/// Face masks of every simplex for the bitmask enumerations.
#[derive(Debug, Clone)]
pub(crate) struct Masks {
    pub facets: Vec<u64>,
    pub full: u64,
}

impl Masks {
    pub fn new(k: &SimplicialComplex) -> Result<Self> {
        let n = k.simplex_count();
        if n > MAX_SIMPLICES {
            return Err(Error::TooManySimplices {
                simplices: n,
                max: MAX_SIMPLICES,
            });
        }
        let facets = (0..n)
            .map(|s| k.facets(s).iter().fold(0u64, |m, &f| m | 1 << f))
            .collect();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Masks { facets, full })
    }

    /// Calls `visit` with every nonempty set `B` of unplaced simplices such
    /// that `placed ∪ B` is closed under faces.
    pub fn for_each_block(&self, placed: u64, visit: &mut dyn FnMut(u64)) {
        self.extend_block(placed, 0, 0, visit);
    }

    fn extend_block(&self, placed: u64, chosen: u64, from: usize, visit: &mut dyn FnMut(u64)) {
        let n = self.facets.len();
        let mut s = from;
        while s < n && (placed >> s & 1 == 1) {
            s += 1;
        }
        if s == n {
            if chosen != 0 {
                visit(chosen);
            }
            return;
        }
        self.extend_block(placed, chosen, s + 1, visit);
        if self.facets[s] & !(placed | chosen) == 0 {
            self.extend_block(placed, chosen | 1 << s, s + 1, visit);
        }
    }
}

pub(crate) fn mask_to_ids(mask: u64) -> Vec<SimplexId> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// All monotone ordered set partitions, as block masks.
fn ordered_partitions(masks: &Masks) -> Vec<Vec<u64>> {
    let mut firsts = Vec::new();
    masks.for_each_block(0, &mut |b| firsts.push(b));
    firsts
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut out = Vec::new();
            let mut stack = vec![b];
            extend_partition(masks, b, &mut stack, &mut out);
            out
        })
        .collect()
}

fn extend_partition(masks: &Masks, placed: u64, stack: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if placed == masks.full {
        out.push(stack.clone());
        return;
    }
    masks.for_each_block(placed, &mut |b| {
        stack.push(b);
        extend_partition(masks, placed | b, stack, out);
        stack.pop();
    });
}

/// Enumerates filter strata, sorted by their serialization order.
pub fn enumerate_filter_strata(
    k: &SimplicialComplex,
    mode: StratumMode,
) -> Result<Vec<FilterStratum>> {
    let masks = Masks::new(k)?;
    let mut out: Vec<FilterStratum> = ordered_partitions(&masks)
        .into_par_iter()
        .flat_map_iter(|p| {
            let blocks: Vec<Vec<SimplexId>> = p.iter().map(|&m| mask_to_ids(m)).collect();
            let base = FilterStratum::new_unchecked(blocks, false, false);
            let keep = mode != StratumMode::LowerStar || base.is_lower_star(k);
            let flags: &[(bool, bool)] = match (keep, mode) {
                (false, _) => &[],
                (true, StratumMode::Interior) => &[(false, false)],
                (true, _) if base.blocks.len() >= 2 => {
                    &[(false, false), (true, false), (false, true), (true, true)]
                }
                (true, _) => &[(false, false), (true, false), (false, true)],
            };
            flags
                .iter()
                .map(|&(z, o)| FilterStratum::new_unchecked(base.blocks.clone(), z, o))
                .collect::<Vec<_>>()
        })
        .collect();
    out.par_sort();
    Ok(out)
}

/// The filter giving the `i`-th interior block the value `i/(m+1)`.
pub fn representative_filter(k: &SimplicialComplex, st: &FilterStratum) -> Filter {
    let m = st.interior_dim() as i64;
    let values: Vec<BigRational> = (1..=m).map(|i| ratio(i, m + 1)).collect();
    st.filter_with_values(k, &values)
        .expect("representative values are valid")
}

/// Symbol of each block in the type of `st`, before re-ranking: pinned blocks
/// get `Zero`/`One`, interior blocks `Rank(position + 1)`.
pub(crate) fn raw_block_symbols(st: &FilterStratum) -> Vec<Endpoint> {
    (0..st.blocks.len())
        .map(|i| match st.interior_index(i) {
            Some(j) => Endpoint::Rank(j as u32 + 1),
            None if st.at_zero && i == 0 => Endpoint::Zero,
            None => Endpoint::One,
        })
        .collect()
}

/// Combinatorial barcode type of every filter in `st`.
pub fn barcode_of_stratum(
    k: &SimplicialComplex,
    st: &FilterStratum,
    field: FieldSpec,
) -> CombinatorialBarcode {
    let mut order = Vec::with_capacity(k.simplex_count());
    let mut levels = Vec::with_capacity(k.simplex_count());
    for (i, b) in st.blocks.iter().enumerate() {
        order.extend_from_slice(b);
        levels.extend(std::iter::repeat_n(i, b.len()));
    }
    let symbols = raw_block_symbols(st);
    let degrees = persistence_by_levels(k, &order, &levels, field)
        .into_iter()
        .map(|bars| {
            bars.into_iter()
                .map(|(b, d)| Bar {
                    birth: symbols[b],
                    death: d.map(|d| symbols[d]).unwrap_or(Endpoint::Inf),
                })
                .collect()
        })
        .collect();
    CombinatorialBarcode::rerank(degrees)
}

/// Whether `low` lies in the closure of `high`: every block of `low` is a union
/// of consecutive blocks of `high`, and pinned ends stay pinned.
pub fn stratum_closure_leq(low: &FilterStratum, high: &FilterStratum) -> bool {
    if high.at_zero && !low.at_zero || high.at_one && !low.at_one {
        return false;
    }
    if low.blocks.len() > high.blocks.len() {
        return false;
    }
    let n: usize = high.blocks.iter().map(|b| b.len()).sum();
    if low.blocks.iter().map(|b| b.len()).sum::<usize>() != n {
        return false;
    }
    let high_of = high.block_of();
    let mut next = 0;
    for b in &low.blocks {
        let lo = b.iter().map(|&s| high_of[s]).min().unwrap();
        let hi = b.iter().map(|&s| high_of[s]).max().unwrap();
        if lo != next {
            return false;
        }
        let covered: usize = high.blocks[lo..=hi].iter().map(|x| x.len()).sum();
        if covered != b.len() {
            return false;
        }
        next = hi + 1;
    }
    next == high.blocks.len()
}

/// One barcode stratum of the image: all filter strata sharing a type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarcodeStratumRecord {
    pub barcode_type: CombinatorialBarcode,
    pub dim: u32,
    pub codim: usize,
    pub finite_endpoints: usize,
    /// `(♯K − ♯D)/2` written as `num/den`.
    #[serde(with = "half_integer")]
    pub bounded_deficit_twice: usize,
    /// Indices into the list of strata that was grouped; local to one run.
    pub member_strata: Vec<usize>,
}

impl BarcodeStratumRecord {
    pub fn new(
        k: &SimplicialComplex,
        barcode_type: CombinatorialBarcode,
        members: Vec<usize>,
    ) -> Self {
        let n = k.simplex_count();
        let finite = barcode_type.finite_endpoints();
        BarcodeStratumRecord {
            dim: barcode_type.dim(),
            codim: n - barcode_type.dim() as usize,
            finite_endpoints: finite,
            bounded_deficit_twice: n
                .checked_sub(finite)
                .expect("at most one endpoint per simplex"),
            barcode_type,
            member_strata: members,
        }
    }

    pub fn bounded_deficit(&self) -> BigRational {
        ratio(self.bounded_deficit_twice as i64, 2)
    }
}

mod half_integer {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(twice: &usize, s: S) -> Result<S::Ok, S::Error> {
        if twice.is_multiple_of(2) {
            s.serialize_str(&format!("{}/1", twice / 2))
        } else {
            s.serialize_str(&format!("{twice}/2"))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let s = String::deserialize(d)?;
        let q = crate::persistence::parse_rational(&s)
            .ok_or_else(|| serde::de::Error::custom("bad rational"))?;
        let twice = q * crate::persistence::ratio(2, 1);
        if !twice.is_integer() {
            return Err(serde::de::Error::custom("not a half-integer"));
        }
        twice
            .to_integer()
            .try_into()
            .map_err(|_| serde::de::Error::custom("negative deficit"))
    }
}

/// Groups strata by barcode type; records sorted by `(codim, type string)`.
pub fn group_strata_by_barcode(
    k: &SimplicialComplex,
    strata: &[FilterStratum],
    field: FieldSpec,
) -> Vec<BarcodeStratumRecord> {
    let types: Vec<CombinatorialBarcode> = strata
        .par_iter()
        .map(|st| barcode_of_stratum(k, st, field))
        .collect();
    let mut groups: HashMap<CombinatorialBarcode, Vec<usize>> = HashMap::new();
    for (i, t) in types.into_iter().enumerate() {
        groups.entry(t).or_default().push(i);
    }
    let mut records: Vec<BarcodeStratumRecord> = groups
        .into_iter()
        .map(|(t, members)| BarcodeStratumRecord::new(k, t, members))
        .collect();
    records.sort_by_cached_key(|r| (r.codim, r.barcode_type.to_string()));
    records
}

/// Barcode strata of the image for the given mode. Lower-star images use
/// flagless lower-star strata so that they are comparable to the interior image.
pub fn image_records(
    k: &SimplicialComplex,
    mode: StratumMode,
    field: FieldSpec,
) -> Result<(Vec<FilterStratum>, Vec<BarcodeStratumRecord>)> {
    let strata: Vec<FilterStratum> = match mode {
        StratumMode::LowerStar => enumerate_filter_strata(k, StratumMode::LowerStar)?
            .into_iter()
            .filter(|s| !s.at_zero && !s.at_one)
            .collect(),
        m => enumerate_filter_strata(k, m)?,
    };
    let records = group_strata_by_barcode(k, &strata, field);
    Ok((strata, records))
}
