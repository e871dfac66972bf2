#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num::BigRational;
use phfiber::barcode::CombinatorialBarcode;
use phfiber::cli::load_complex;
use phfiber::complex::{boundary_matrix, SimplicialComplex};
use phfiber::field::{FieldSpec, Matrix};
use phfiber::persistence::{Filter, TotalBarcode};
use phfiber::strata::{stratum_closure_leq, FilterStratum};

pub const D0_LEFT: &str = "0:(1,inf),(2,3),(4,5);1:(6,inf)";
pub const D0_MID: &str = "0:(1,inf),(2,4),(3,5);1:(6,inf)";
pub const D0_RIGHT: &str = "0:(1,inf),(2,5),(3,4);1:(6,inf)";
pub const D2: &str = "0:(1,inf),(2,3);1:(4,inf)";
pub const D3_MID: &str = "0:(1,inf),(2,3);1:(3,inf)";
pub const D3_LEFT: &str = "0:(1,inf),(1,2);1:(3,inf)";
pub const D4_LEFT: &str = "0:(1,inf);1:(2,inf)";
pub const D4_RIGHT: &str = "0:(1,inf),(1,2);1:(2,inf)";
pub const D5: &str = "0:(1,inf);1:(1,inf)";

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(format!("{name}.complex.json"))
}

pub fn complex(name: &str) -> SimplicialComplex {
    load_complex(&data(name)).unwrap()
}

pub fn ty(s: &str) -> CombinatorialBarcode {
    s.parse().unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `p`-cycles of the sublevel complex `members`, as columns in `C_p(K)`.
fn cycles(k: &SimplicialComplex, p: usize, members: &[bool], field: FieldSpec) -> Matrix {
    let range = k.simplices_of_dim(p);
    let cols: Vec<usize> = range
        .clone()
        .filter(|&s| members[s])
        .map(|s| s - range.start)
        .collect();
    let kernel = boundary_matrix(k, p, field)
        .unwrap()
        .select_columns(&cols)
        .kernel();
    let mut z = Matrix::zeros(range.len(), kernel.cols(), field);
    for (i, &row) in cols.iter().enumerate() {
        for j in 0..kernel.cols() {
            z.set(row, j, kernel.get(i, j));
        }
    }
    z
}

fn boundaries(k: &SimplicialComplex, p: usize, members: &[bool], field: FieldSpec) -> Matrix {
    let range = k.simplices_of_dim(p);
    if p == k.dimension() {
        return Matrix::zeros(range.len(), 0, field);
    }
    let up = k.simplices_of_dim(p + 1);
    let cols: Vec<usize> = up
        .clone()
        .filter(|&s| members[s])
        .map(|s| s - up.start)
        .collect();
    boundary_matrix(k, p + 1, field)
        .unwrap()
        .select_columns(&cols)
}

/// Barcode from persistent Betti numbers `β^{i,j} = dim Z_i - dim(Z_i ∩ B_j)`
/// and inclusion-exclusion, with no column reduction.
pub fn oracle_barcode(k: &SimplicialComplex, f: &Filter, field: FieldSpec) -> TotalBarcode {
    let levels: Vec<BigRational> = f
        .values()
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = levels.len();
    let sub: Vec<Vec<bool>> = levels
        .iter()
        .map(|t| f.values().iter().map(|v| v <= t).collect())
        .collect();
    let mut degrees = Vec::new();
    for p in 0..=k.dimension() {
        let z: Vec<Matrix> = sub.iter().map(|m| cycles(k, p, m, field)).collect();
        let b: Vec<Matrix> = sub.iter().map(|m| boundaries(k, p, m, field)).collect();
        let beta = |i: isize, j: usize| -> i64 {
            if i < 0 {
                return 0;
            }
            let zi = &z[i as usize];
            let inter = zi.rank() + b[j].rank() - zi.hconcat(&b[j]).rank();
            (zi.rank() - inter) as i64
        };
        let mut bars = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mu =
                    beta(i as isize, j - 1) - beta(i as isize, j) - beta(i as isize - 1, j - 1)
                        + beta(i as isize - 1, j);
                for _ in 0..mu {
                    bars.push((levels[i].clone(), Some(levels[j].clone())));
                }
            }
            let mu = beta(i as isize, n - 1) - beta(i as isize - 1, n - 1);
            for _ in 0..mu {
                bars.push((levels[i].clone(), None));
            }
        }
        bars.sort();
        degrees.push(bars);
    }
    TotalBarcode { degrees }
}

/// Every monotone assignment of levels `0..=n+1` to simplices, up to
/// renaming the interior levels `1..=n` order-preservingly. Level 0 means
/// value 0 and level n+1 means value 1.
pub fn brute_force_strata(k: &SimplicialComplex, flags: bool) -> BTreeSet<FilterStratum> {
    let n = k.simplex_count();
    let (lo, hi) = if flags { (0, n + 1) } else { (1, n) };
    let mut out = BTreeSet::new();
    let mut levels = vec![lo; n];
    loop {
        let monotone = (0..n).all(|s| k.facets(s).iter().all(|&f| levels[f] <= levels[s]));
        if monotone {
            let used: BTreeSet<usize> = levels.iter().copied().collect();
            let blocks: Vec<Vec<usize>> = used
                .iter()
                .map(|&l| (0..n).filter(|&s| levels[s] == l).collect())
                .collect();
            let at_zero = flags && used.contains(&0);
            let at_one = flags && used.contains(&(n + 1));
            if let Ok(st) = FilterStratum::new(k, blocks, at_zero, at_one) {
                out.insert(st);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if levels[i] < hi {
                levels[i] += 1;
                break;
            }
            levels[i] = lo;
            i += 1;
        }
    }
}

/// A filter in `st` with interior blocks at `1/(b+1), …, b/(b+1)`.
pub fn sample_filter(k: &SimplicialComplex, st: &FilterStratum) -> Filter {
    let b = st.interior_dim() as i64;
    let vals: Vec<BigRational> = (1..=b).map(|i| q(i, b + 1)).collect();
    st.filter_with_values(k, &vals).unwrap()
}

/// Every stratum in `all` paired with the type of its oracle barcode.
pub fn classify(
    k: &SimplicialComplex,
    all: &BTreeSet<FilterStratum>,
) -> Vec<(FilterStratum, CombinatorialBarcode)> {
    all.iter()
        .map(|st| {
            let b = oracle_barcode(k, &sample_filter(k, st), FieldSpec::F2);
            (st.clone(), CombinatorialBarcode::from_barcode(&b))
        })
        .collect()
}

pub fn oracle_types(
    classified: &[(FilterStratum, CombinatorialBarcode)],
) -> BTreeMap<CombinatorialBarcode, usize> {
    let mut out = BTreeMap::new();
    for (_, t) in classified {
        *out.entry(t.clone()).or_insert(0) += 1;
    }
    out
}

/// Cells of the fiber over `t` found by brute force: every stratum of type
/// `t`. Its cell dimension is the number of interior blocks not carrying an
/// endpoint rank.
pub struct OracleFiber {
    pub cells: Vec<(FilterStratum, usize)>,
}

impl OracleFiber {
    pub fn new(
        classified: &[(FilterStratum, CombinatorialBarcode)],
        t: &CombinatorialBarcode,
    ) -> Self {
        let m = t.dim() as usize;
        let cells = classified
            .iter()
            .filter(|(_, u)| u == t)
            .map(|(st, _)| (st.clone(), st.interior_dim() - m))
            .collect();
        OracleFiber { cells }
    }

    pub fn count(&self, d: usize) -> usize {
        self.cells.iter().filter(|c| c.1 == d).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.1 % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// Components of the union of cells, glued along the closure order.
    pub fn components(&self) -> usize {
        let n = self.cells.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && stratum_closure_leq(&self.cells[a].0, &self.cells[b].0) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        (0..n)
            .map(|x| find(&mut parent, x))
            .collect::<BTreeSet<_>>()
            .len()
    }
}
