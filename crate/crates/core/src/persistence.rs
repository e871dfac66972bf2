//! Filters, sublevel-set persistence and Betti numbers.

use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Formats a rational as `num/den` (always with an explicit denominator).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A monotone map from the simplices of a complex to `[0,1]`, indexed by
/// canonical simplex id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    values: Vec<BigRational>,
}

impl Filter {
    pub fn new(k: &SimplicialComplex, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != k.simplex_count() {
            return Err(Error::NotAFilter(format!(
                "expected {} values, got {}",
                k.simplex_count(),
                values.len()
            )));
        }
        let one = BigRational::one();
        for (id, v) in values.iter().enumerate() {
            if v.is_negative() || *v > one {
                return Err(Error::NotAFilter(format!(
                    "value {} on {} is outside [0,1]",
                    format_rational(v),
                    k.simplex(id)
                )));
            }
            for &face in k.facets(id) {
                if values[face] > *v {
                    return Err(Error::NotAFilter(format!(
                        "face {} has larger value than {}",
                        k.simplex(face),
                        k.simplex(id)
                    )));
                }
            }
        }
        Ok(Filter { values })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(k: &SimplicialComplex, values: &[(i64, i64)]) -> Result<Self> {
        Filter::new(k, values.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, id: SimplexId) -> &BigRational {
        &self.values[id]
    }

    /// Post-composes every value with `phi`. The result is a filter whenever
    /// `phi` is monotone and maps `[0,1]` into itself.
    pub fn reparametrize(
        &self,
        k: &SimplicialComplex,
        phi: impl Fn(&BigRational) -> BigRational,
    ) -> Result<Filter> {
        Filter::new(k, self.values.iter().map(phi).collect())
    }

    /// Simplex ids sorted by value, ties broken by canonical order.
    pub fn filtration_order(&self) -> Vec<SimplexId> {
        let mut order: Vec<SimplexId> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].cmp(&self.values[b]).then(a.cmp(&b)));
        order
    }
}

/// Death time of a bar; `None` means infinity.
pub type Death = Option<BigRational>;

/// Barcode of a filter: for each degree `0..=dim K`, a sorted multiset of
/// bars `(birth, death)` with `birth < death`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotalBarcode {
    pub degrees: Vec<Vec<(BigRational, Death)>>,
}

impl TotalBarcode {
    pub fn infinite_bars(&self, degree: usize) -> usize {
        self.degrees
            .get(degree)
            .map(|bars| bars.iter().filter(|b| b.1.is_none()).count())
            .unwrap_or(0)
    }

    pub fn bounded_bars(&self, degree: usize) -> usize {
        self.degrees
            .get(degree)
            .map(|bars| bars.iter().filter(|b| b.1.is_some()).count())
            .unwrap_or(0)
    }

    /// Maps every endpoint through `phi` (infinity fixed) and drops bars that
    /// become empty.
    pub fn map_endpoints(&self, phi: impl Fn(&BigRational) -> BigRational) -> TotalBarcode {
        let degrees = self
            .degrees
            .iter()
            .map(|bars| {
                let mut out: Vec<(BigRational, Death)> = bars
                    .iter()
                    .map(|(b, d)| (phi(b), d.as_ref().map(&phi)))
                    .filter(|(b, d)| d.as_ref() != Some(b))
                    .collect();
                out.sort();
                out
            })
            .collect();
        TotalBarcode { degrees }
    }
}

impl fmt::Display for TotalBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, bars) in self.degrees.iter().enumerate() {
            if p > 0 {
                write!(f, "; ")?;
            }
            write!(f, "H{p}:")?;
            for (b, d) in bars {
                let d = d
                    .as_ref()
                    .map(format_rational)
                    .unwrap_or_else(|| "inf".into());
                write!(f, " ({},{})", format_rational(b), d)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DegreeDoc {
    degree: usize,
    bars: Vec<[String; 2]>,
}

impl Serialize for TotalBarcode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<DegreeDoc> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(degree, bars)| DegreeDoc {
                degree,
                bars: bars
                    .iter()
                    .map(|(b, d)| {
                        [
                            format_rational(b),
                            d.as_ref()
                                .map(format_rational)
                                .unwrap_or_else(|| "inf".into()),
                        ]
                    })
                    .collect(),
            })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TotalBarcode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<DegreeDoc>::deserialize(d)?;
        let mut degrees = Vec::with_capacity(docs.len());
        for (i, doc) in docs.into_iter().enumerate() {
            if doc.degree != i {
                return Err(D::Error::custom("degrees must be listed in order"));
            }
            let mut bars = Vec::with_capacity(doc.bars.len());
            for [b, e] in doc.bars {
                let b = parse_rational(&b).ok_or_else(|| D::Error::custom("bad rational"))?;
                let e = if e == "inf" {
                    None
                } else {
                    Some(parse_rational(&e).ok_or_else(|| D::Error::custom("bad rational"))?)
                };
                bars.push((b, e));
            }
            degrees.push(bars);
        }
        Ok(TotalBarcode { degrees })
    }
}

/// Outcome of appending one simplex to a [`ColumnReducer`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// The simplex creates a new class.
    Birth,
    /// The simplex kills the class created at the given filtration position.
    Death(usize),
}

/// Incremental column reduction over `F_p`. Simplices are appended in
/// filtration order; the last append can be undone, which makes the reducer
/// usable inside a depth-first search.
#[derive(Debug, Clone)]
pub struct ColumnReducer {
    field: FieldSpec,
    position: Vec<Option<usize>>,
    order: Vec<SimplexId>,
    pivots: HashMap<usize, Vec<(usize, u32)>>,
    pairing: Vec<Pairing>,
    killed: Vec<bool>,
}

impl ColumnReducer {
    pub fn new(k: &SimplicialComplex, field: FieldSpec) -> Self {
        ColumnReducer {
            field,
            position: vec![None; k.simplex_count()],
            order: Vec::new(),
            pivots: HashMap::new(),
            pairing: Vec::new(),
            killed: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn simplex_at(&self, pos: usize) -> SimplexId {
        self.order[pos]
    }

    /// Whether the class born at `pos` has been killed.
    pub fn is_killed(&self, pos: usize) -> bool {
        self.killed[pos]
    }

    /// Appends a simplex whose faces have all been appended already.
    pub fn push(&mut self, k: &SimplicialComplex, id: SimplexId) -> Pairing {
        let f = self.field;
        let mut col: Vec<(usize, u32)> = k
            .facets(id)
            .iter()
            .enumerate()
            .map(|(i, &face)| {
                let pos = self.position[face].expect("faces are appended first");
                (pos, if i % 2 == 0 { 1 } else { f.neg(1) })
            })
            .collect();
        col.sort_unstable();
        let pos = self.order.len();
        self.order.push(id);
        self.position[id] = Some(pos);
        self.killed.push(false);
        let result = loop {
            let Some(&(low, coeff)) = col.last() else {
                break Pairing::Birth;
            };
            match self.pivots.get(&low) {
                None => {
                    self.pivots.insert(low, col);
                    self.killed[low] = true;
                    break Pairing::Death(low);
                }
                Some(pivot) => {
                    let pc = pivot.last().expect("pivot columns are nonempty").1;
                    let factor = f.mul(coeff, f.inv(pc));
                    col = axpy(f, &col, factor, pivot);
                }
            }
        };
        self.pairing.push(result);
        result
    }

    /// Undoes the most recent [`push`](Self::push).
    pub fn pop(&mut self) {
        let id = self.order.pop().expect("pop on empty reducer");
        self.position[id] = None;
        self.killed.pop();
        if let Some(Pairing::Death(low)) = self.pairing.pop() {
            self.pivots.remove(&low);
            self.killed[low] = false;
        }
    }

    pub fn pairing(&self, pos: usize) -> Pairing {
        self.pairing[pos]
    }
}

/// `a - factor * b` on sorted sparse columns.
fn axpy(f: FieldSpec, a: &[(usize, u32)], factor: u32, b: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.neg(f.mul(factor, b[j].1))));
            j += 1;
        } else {
            let v = f.sub(a[i].1, f.mul(factor, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// A bar expressed in filtration levels (`None` death = infinite).
pub type LevelBar = (usize, Option<usize>);

/// Persistence pairs of the filtration that adds the simplices of `order`
/// one at a time, `levels[i]` being the level of `order[i]`. Pairs with equal
/// birth and death level are dropped. Returns bars per degree `0..=dim K`.
pub fn persistence_by_levels(
    k: &SimplicialComplex,
    order: &[SimplexId],
    levels: &[usize],
    field: FieldSpec,
) -> Vec<Vec<LevelBar>> {
    let mut reducer = ColumnReducer::new(k, field);
    for &id in order {
        reducer.push(k, id);
    }
    let mut out = vec![Vec::new(); k.dimension() + 1];
    for pos in 0..order.len() {
        let dim = k.simplex(order[pos]).dim();
        match reducer.pairing(pos) {
            Pairing::Birth if !reducer.is_killed(pos) => out[dim].push((levels[pos], None)),
            Pairing::Birth => {}
            Pairing::Death(b) => {
                if levels[b] != levels[pos] {
                    out[dim - 1].push((levels[b], Some(levels[pos])));
                }
            }
        }
    }
    for bars in &mut out {
        bars.sort();
    }
    out
}

/// Barcode of the sublevel-set filtration of `f`.
pub fn barcode_of_filter(
    k: &SimplicialComplex,
    f: &Filter,
    field: FieldSpec,
) -> Result<TotalBarcode> {
    // re-validate: a Filter may have been built for another complex
    let f = Filter::new(k, f.values.clone())?;
    let order = f.filtration_order();
    let mut distinct: Vec<&BigRational> = order.iter().map(|&i| &f.values[i]).collect();
    distinct.dedup();
    let levels: Vec<usize> = order
        .iter()
        .map(|&i| {
            distinct
                .binary_search(&&f.values[i])
                .expect("value present")
        })
        .collect();
    let bars = persistence_by_levels(k, &order, &levels, field);
    let degrees = bars
        .into_iter()
        .map(|bars| {
            let mut out: Vec<(BigRational, Death)> = bars
                .into_iter()
                .map(|(b, d)| (distinct[b].clone(), d.map(|d| distinct[d].clone())))
                .collect();
            out.sort();
            out
        })
        .collect();
    Ok(TotalBarcode { degrees })
}

/// Betti numbers `β_0..β_d` from ranks of boundary matrices.
pub fn betti_numbers(k: &SimplicialComplex, field: FieldSpec) -> Vec<usize> {
    let d = k.dimension();
    let ranks: Vec<usize> = (0..=d + 1)
        .map(|p| {
            if p == 0 || p > d {
                0
            } else {
                crate::complex::boundary_matrix(k, p, field)
                    .expect("degree in range")
                    .rank()
            }
        })
        .collect();
    (0..=d)
        .map(|p| k.simplices_of_dim(p).len() - ranks[p] - ranks[p + 1])
        .collect()
}
