//! Combinatorial barcode types and endpoint maps between them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigRational, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::persistence::TotalBarcode;

/// Endpoint symbol of a combinatorial bar. The derived order is
/// `Zero < Rank(1) < … < Rank(m) < One < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Zero,
    Rank(u32),
    One,
    Inf,
}

impl Endpoint {
    /// Position in the symbol list `Zero, 1, …, m, One` of a type of dimension `m`.
    pub fn index(self, m: u32) -> usize {
        match self {
            Endpoint::Zero => 0,
            Endpoint::Rank(r) => r as usize,
            Endpoint::One => m as usize + 1,
            Endpoint::Inf => m as usize + 2,
        }
    }

    /// Inverse of [`index`](Self::index) on `0..=m+1`.
    pub fn from_index(i: usize, m: u32) -> Endpoint {
        if i == 0 {
            Endpoint::Zero
        } else if i == m as usize + 1 {
            Endpoint::One
        } else {
            Endpoint::Rank(i as u32)
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Zero => write!(f, "zero"),
            Endpoint::Rank(r) => write!(f, "{r}"),
            Endpoint::One => write!(f, "one"),
            Endpoint::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for Endpoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "zero" => Ok(Endpoint::Zero),
            "one" => Ok(Endpoint::One),
            "inf" => Ok(Endpoint::Inf),
            _ => match t.parse::<u32>() {
                Ok(r) if r > 0 => Ok(Endpoint::Rank(r)),
                _ => Err(syntax(t, "expected zero, one, inf or a positive integer")),
            },
        }
    }
}

fn syntax(token: &str, reason: &str) -> Error {
    Error::BarcodeSyntax {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub birth: Endpoint,
    pub death: Endpoint,
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.birth, self.death)
    }
}

/// A barcode up to order-preserving reparametrization of `(0,1)`: interior
/// endpoints are replaced by their ranks `1..=dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombinatorialBarcode {
    degrees: Vec<Vec<Bar>>,
    dim: u32,
}

impl CombinatorialBarcode {
    /// Builds a type from per-degree bars, checking that bars are proper and
    /// that the ranks used are exactly `1..=m`.
    pub fn new(mut degrees: Vec<Vec<Bar>>) -> Result<Self> {
        let mut ranks = BTreeSet::new();
        for bars in &mut degrees {
            bars.sort();
            for bar in bars.iter() {
                if bar.birth == Endpoint::Inf {
                    return Err(syntax(&bar.to_string(), "a bar cannot be born at inf"));
                }
                if bar.birth >= bar.death {
                    return Err(syntax(&bar.to_string(), "birth must precede death"));
                }
                for e in [bar.birth, bar.death] {
                    if let Endpoint::Rank(r) = e {
                        ranks.insert(r);
                    }
                }
            }
        }
        while degrees.last().is_some_and(|b| b.is_empty()) {
            degrees.pop();
        }
        let dim = ranks.len() as u32;
        if let Some(missing) = (1..=dim).find(|r| !ranks.contains(r)) {
            let max = ranks.iter().max().copied().unwrap_or(0);
            return Err(syntax(
                &max.to_string(),
                &format!("ranks must be exactly 1..{dim}; rank {missing} is unused"),
            ));
        }
        Ok(CombinatorialBarcode { degrees, dim })
    }

    /// Canonical type of a barcode with values in `[0,1]`.
    pub fn from_barcode(b: &TotalBarcode) -> Self {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let interior: Vec<&BigRational> = b
            .degrees
            .iter()
            .flatten()
            .flat_map(|(x, y)| std::iter::once(x).chain(y.as_ref()))
            .filter(|v| **v > zero && **v < one)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let symbol = |v: &BigRational| {
            if *v == zero {
                Endpoint::Zero
            } else if *v == one {
                Endpoint::One
            } else {
                Endpoint::Rank(interior.binary_search(&v).expect("interior value") as u32 + 1)
            }
        };
        let degrees = b
            .degrees
            .iter()
            .map(|bars| {
                bars.iter()
                    .map(|(x, y)| Bar {
                        birth: symbol(x),
                        death: y.as_ref().map(symbol).unwrap_or(Endpoint::Inf),
                    })
                    .collect()
            })
            .collect();
        CombinatorialBarcode::new(degrees).expect("canonical barcode")
    }

    /// Type with arbitrary symbols: ranks are compressed to `1..=m`.
    pub fn rerank(degrees: Vec<Vec<Bar>>) -> Self {
        let used: BTreeSet<u32> = degrees
            .iter()
            .flatten()
            .flat_map(|b| [b.birth, b.death])
            .filter_map(|e| match e {
                Endpoint::Rank(r) => Some(r),
                _ => None,
            })
            .collect();
        let used: Vec<u32> = used.into_iter().collect();
        let map = |e: Endpoint| match e {
            Endpoint::Rank(r) => Endpoint::Rank(used.binary_search(&r).unwrap() as u32 + 1),
            other => other,
        };
        let degrees = degrees
            .into_iter()
            .map(|bars| {
                bars.into_iter()
                    .map(|b| Bar {
                        birth: map(b.birth),
                        death: map(b.death),
                    })
                    .collect()
            })
            .collect();
        CombinatorialBarcode::new(degrees).expect("reranked barcode")
    }

    /// Number of distinct interior endpoints.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Bars per degree; trailing empty degrees are omitted.
    pub fn degrees(&self) -> &[Vec<Bar>] {
        &self.degrees
    }

    pub fn bars(&self, degree: usize) -> &[Bar] {
        self.degrees
            .get(degree)
            .map(|b| b.as_slice())
            .unwrap_or(&[])
    }

    pub fn bar_count(&self) -> usize {
        self.degrees.iter().map(|b| b.len()).sum()
    }

    /// Finite endpoints counted with multiplicity (`♯D`).
    pub fn finite_endpoints(&self) -> usize {
        self.degrees
            .iter()
            .flatten()
            .map(|b| 1 + usize::from(b.death != Endpoint::Inf))
            .sum()
    }

    pub fn has_symbol(&self, e: Endpoint) -> bool {
        self.degrees
            .iter()
            .flatten()
            .any(|b| b.birth == e || b.death == e)
    }

    /// Whether every endpoint lies in `(0,1) ∪ {inf}`.
    pub fn is_interior(&self) -> bool {
        !self.has_symbol(Endpoint::Zero) && !self.has_symbol(Endpoint::One)
    }

    /// Symbols `Zero, 1, …, m, One` in order.
    pub fn symbols(&self) -> Vec<Endpoint> {
        (0..=self.dim as usize + 1)
            .map(|i| Endpoint::from_index(i, self.dim))
            .collect()
    }
}

impl fmt::Display for CombinatorialBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, bars) in self.degrees.iter().enumerate() {
            if bars.is_empty() {
                continue;
            }
            if !first {
                write!(f, ";")?;
            }
            first = false;
            write!(f, "{p}:")?;
            for (i, bar) in bars.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{bar}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CombinatorialBarcode {
    type Err = Error;

    /// Parses `"0:(zero,inf),(1,2);1:(3,inf)"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(syntax("", "empty barcode type"));
        }
        let mut degrees: Vec<Vec<Bar>> = Vec::new();
        let mut last_degree: Option<usize> = None;
        for part in s.split(';') {
            let part = part.trim();
            let (deg, rest) = part
                .split_once(':')
                .ok_or_else(|| syntax(part, "expected `<degree>:<bars>`"))?;
            let deg: usize = deg
                .trim()
                .parse()
                .map_err(|_| syntax(deg.trim(), "degree must be a non-negative integer"))?;
            if last_degree.is_some_and(|d| d >= deg) {
                return Err(syntax(&deg.to_string(), "degrees must be increasing"));
            }
            last_degree = Some(deg);
            if degrees.len() <= deg {
                degrees.resize(deg + 1, Vec::new());
            }
            let mut rest = rest.trim();
            loop {
                let open = rest
                    .strip_prefix('(')
                    .ok_or_else(|| syntax(rest, "expected `(` starting a bar"))?;
                let close = open
                    .find(')')
                    .ok_or_else(|| syntax(rest, "unterminated bar"))?;
                let inner = &open[..close];
                let (b, d) = inner
                    .split_once(',')
                    .ok_or_else(|| syntax(inner, "a bar has two endpoints"))?;
                let bar = Bar {
                    birth: b.parse()?,
                    death: d.parse()?,
                };
                degrees[deg].push(bar);
                rest = open[close + 1..].trim();
                if rest.is_empty() {
                    break;
                }
                rest = rest
                    .strip_prefix(',')
                    .ok_or_else(|| syntax(rest, "expected `,` between bars"))?
                    .trim();
            }
        }
        CombinatorialBarcode::new(degrees)
    }
}

impl Serialize for CombinatorialBarcode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CombinatorialBarcode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A monotone map from the symbols `Zero, 1..m, One` of one type to the
/// symbols `Zero, 1..m', One` of another, fixing `Zero` and `One`; `Inf` is
/// implicitly fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndpointMap {
    source_dim: u32,
    target_dim: u32,
    /// Images of `Zero, 1, …, m, One`.
    images: Vec<Endpoint>,
}

impl EndpointMap {
    /// `ranks[i]` is the image of rank `i + 1`.
    pub fn new(target_dim: u32, ranks: Vec<Endpoint>) -> Result<Self> {
        let source_dim = ranks.len() as u32;
        let mut images = Vec::with_capacity(ranks.len() + 2);
        images.push(Endpoint::Zero);
        images.extend(ranks);
        images.push(Endpoint::One);
        for e in &images {
            match e {
                Endpoint::Inf => {
                    return Err(Error::NotSimplicial(
                        "finite symbols cannot map to inf".into(),
                    ))
                }
                Endpoint::Rank(r) if *r == 0 || *r > target_dim => {
                    return Err(Error::NotSimplicial(format!(
                        "rank {r} exceeds target dimension {target_dim}"
                    )))
                }
                _ => {}
            }
        }
        if images.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::NotSimplicial("map is not monotone".into()));
        }
        Ok(EndpointMap {
            source_dim,
            target_dim,
            images,
        })
    }

    pub fn identity(m: u32) -> Self {
        EndpointMap::new(m, (1..=m).map(Endpoint::Rank).collect()).unwrap()
    }

    pub fn source_dim(&self) -> u32 {
        self.source_dim
    }

    pub fn target_dim(&self) -> u32 {
        self.target_dim
    }

    /// Images of the ranks `1..=m`.
    pub fn rank_images(&self) -> &[Endpoint] {
        &self.images[1..self.images.len() - 1]
    }

    pub fn apply(&self, e: Endpoint) -> Endpoint {
        match e {
            Endpoint::Inf => Endpoint::Inf,
            other => self.images[other.index(self.source_dim)],
        }
    }

    /// Whether the map is onto the target symbols, i.e. consecutive symbols
    /// go to equal or consecutive symbols.
    pub fn is_simplicial(&self) -> bool {
        let t = self.target_dim;
        self.images
            .windows(2)
            .all(|w| w[1].index(t) - w[0].index(t) <= 1)
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim == self.target_dim
            && self
                .rank_images()
                .iter()
                .enumerate()
                .all(|(i, e)| *e == Endpoint::Rank(i as u32 + 1))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &EndpointMap) -> Result<EndpointMap> {
        if self.target_dim != other.source_dim {
            return Err(Error::MismatchedFibers(format!(
                "cannot compose a map into dimension {} with a map from dimension {}",
                self.target_dim, other.source_dim
            )));
        }
        EndpointMap::new(
            other.target_dim,
            self.rank_images().iter().map(|&e| other.apply(e)).collect(),
        )
    }

    /// Bars of `t` pushed forward, keeping collapsed bars as `None`; the
    /// outer index is the degree and the inner index the bar of `t`.
    pub fn push_bars(&self, t: &CombinatorialBarcode) -> Vec<Vec<Option<Bar>>> {
        t.degrees()
            .iter()
            .map(|bars| {
                bars.iter()
                    .map(|b| {
                        let img = Bar {
                            birth: self.apply(b.birth),
                            death: self.apply(b.death),
                        };
                        (img.birth != img.death).then_some(img)
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for EndpointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}->{}", Endpoint::from_index(i, self.source_dim), e)?;
        }
        write!(f, "}}")
    }
}

/// Pushes `t` forward along `phi`, drops collapsed bars and re-ranks.
pub fn apply_endpoint_map_to_type(
    phi: &EndpointMap,
    t: &CombinatorialBarcode,
) -> Result<CombinatorialBarcode> {
    if phi.source_dim() != t.dim() {
        return Err(Error::MismatchedFibers(format!(
            "endpoint map has source dimension {}, type {} has dimension {}",
            phi.source_dim(),
            t,
            t.dim()
        )));
    }
    let degrees = phi
        .push_bars(t)
        .into_iter()
        .map(|bars| bars.into_iter().flatten().collect())
        .collect();
    Ok(CombinatorialBarcode::rerank(degrees))
}

/// The pushed-forward bars without re-ranking, or `None` if some target rank
/// is not an endpoint of the image.
pub fn raw_image(phi: &EndpointMap, t: &CombinatorialBarcode) -> Option<CombinatorialBarcode> {
    let degrees = phi
        .push_bars(t)
        .into_iter()
        .map(|bars| bars.into_iter().flatten().collect())
        .collect();
    let image = CombinatorialBarcode::new(degrees).ok()?;
    (image.dim() == phi.target_dim()).then_some(image)
}
