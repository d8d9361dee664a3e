//! Small-group reference tables, produced either from the dense oracle alone
//! or from the engine, in one shared schema so the two can be compared.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, ElementId};
use crate::error::Result;
use crate::group::Group;
use crate::jring::JElement;
use crate::laurent::LaurentPoly;

use super::tbasis::TBasisOracle;

pub type WordMap<T> = BTreeMap<String, T>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenCell {
    pub a: u32,
    pub elements: Vec<String>,
    pub distinguished: Vec<String>,
    pub c_zero: Vec<String>,
    /// Nonzero `(x, y, z, gamma_{x,y,z})` with `x, y` in the cell.
    pub gamma: Vec<(String, String, String, i64)>,
    /// `dim_hom(z, u)`, rows and columns in element order.
    pub dim_hom: Vec<Vec<u64>>,
    pub psi: WordMap<WordMap<u64>>,
    /// `t_w o t_w'` for `w, w'` in `c^0`.
    pub circle: Vec<(String, String, WordMap<i64>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenGroup {
    pub group: String,
    pub order: usize,
    pub nu: u32,
    /// Nonzero `p_{y,w}` for `y < w`, as `(y, w, polynomial)`.
    pub kl: Vec<(String, String, String)>,
    pub cells: Vec<GoldenCell>,
}

/// Sparse `gamma` as used by the oracle path.
type Gamma = BTreeMap<(ElementId, ElementId), BTreeMap<ElementId, i64>>;

fn mul(gamma: &Gamma, a: &BTreeMap<ElementId, i64>, b: &BTreeMap<ElementId, i64>) -> BTreeMap<ElementId, i64> {
    let mut out = BTreeMap::new();
    for (&x, &cx) in a {
        for (&y, &cy) in b {
            if let Some(row) = gamma.get(&(x, y)) {
                for (&z, &g) in row {
                    *out.entry(z).or_insert(0) += cx * cy * g;
                }
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn t(x: ElementId) -> BTreeMap<ElementId, i64> {
    BTreeMap::from([(x, 1)])
}

/// Transitive closure of a relation on `0..n`, reflexive.
fn closure(n: usize, mut rel: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if rel[i][k] {
                for j in 0..n {
                    if rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
    }
    rel
}

/// Everything derived from the dense oracle: products of all pairs, the
/// preorders they generate, `a` as the maximal degree, `gamma` as the
/// corresponding coefficient, and the multiplicities by explicit contraction.
pub fn golden_from_oracle(sys: &CoxeterSystem) -> Result<GoldenGroup> {
    let oracle = TBasisOracle::new(sys)?;
    let n = sys.order();
    let products: Vec<Vec<BTreeMap<ElementId, LaurentPoly>>> =
        (0..n).map(|x| (0..n).map(|y| oracle.product(x, y)).collect()).collect();

    let mut a = vec![0i32; n];
    // below_l[y][z]: c_z occurs in some c_x c_y, i.e. z <=_L y
    let mut below_l = vec![vec![false; n]; n];
    // below_r[x][z]: c_z occurs in some c_x c_y, i.e. z <=_R x
    let mut below_r = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            for (&z, h) in &products[x][y] {
                a[z] = a[z].max(h.degree().expect("nonzero"));
                below_l[y][z] = true;
                below_r[x][z] = true;
            }
        }
    }
    let left = closure(n, below_l.clone());
    let both: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| below_l[i][j] || below_r[i][j]).collect()).collect();
    let two = closure(n, both);
    let same = |rel: &Vec<Vec<bool>>, x: usize, y: usize| rel[x][y] && rel[y][x];

    let mut gamma: Gamma = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            for (&z, h) in &products[x][y] {
                let g = h.coefficient_i64(-a[z]);
                if g != 0 {
                    gamma.entry((x, y)).or_default().insert(z, g);
                }
            }
        }
    }

    let mut reps: Vec<Vec<ElementId>> = Vec::new();
    for w in 0..n {
        if !reps.iter().any(|c| same(&two, c[0], w)) {
            reps.push((0..n).filter(|&u| same(&two, u, w)).collect());
        }
    }
    reps.sort_by_key(|c| (a[c[0]], c[0]));

    let is_dist = |d: ElementId| oracle.kl(0, d).coefficient_i64(-a[d]) != 0;
    let word = |w: ElementId| sys.format_word(w);
    let inv = |w: ElementId| sys.inverse(w);

    let cells = reps
        .iter()
        .map(|els| {
            let dist: Vec<ElementId> = els.iter().copied().filter(|&d| is_dist(d)).collect();
            let zero: Vec<ElementId> = els.iter().copied().filter(|&z| same(&left, z, inv(z))).collect();
            let tau = |xi: &BTreeMap<ElementId, i64>| -> i64 { dist.iter().map(|d| xi.get(d).copied().unwrap_or(0)).sum() };
            let dim_hom = |z: ElementId, u: ElementId| -> u64 {
                let s: i64 = els
                    .iter()
                    .map(|&y| tau(&mul(&gamma, &mul(&gamma, &mul(&gamma, &t(inv(y)), &t(z)), &t(y)), &t(inv(u)))))
                    .sum();
                u64::try_from(s).expect("nonnegative dimension")
            };
            let conj_sum = |xi: &BTreeMap<ElementId, i64>, xi2: &BTreeMap<ElementId, i64>| {
                let mut acc: BTreeMap<ElementId, i64> = BTreeMap::new();
                for &y in els {
                    for (z, c) in mul(&gamma, &mul(&gamma, &mul(&gamma, xi, &t(y)), xi2), &t(inv(y))) {
                        *acc.entry(z).or_insert(0) += c;
                    }
                }
                acc.retain(|_, c| *c != 0);
                acc
            };
            GoldenCell {
                a: a[els[0]] as u32,
                elements: els.iter().map(|&w| word(w)).collect(),
                distinguished: dist.iter().map(|&w| word(w)).collect(),
                c_zero: zero.iter().map(|&w| word(w)).collect(),
                gamma: gamma
                    .iter()
                    .filter(|((x, _), _)| els.contains(x))
                    .flat_map(|(&(x, y), row)| row.iter().map(move |(&z, &g)| (x, y, z, g)))
                    .map(|(x, y, z, g)| (word(x), word(y), word(z), g))
                    .collect(),
                dim_hom: els.iter().map(|&z| els.iter().map(|&u| dim_hom(z, u)).collect()).collect(),
                psi: els
                    .iter()
                    .map(|&x| {
                        let mut acc: BTreeMap<ElementId, i64> = BTreeMap::new();
                        for &y in els {
                            for (z, c) in mul(&gamma, &mul(&gamma, &t(y), &t(x)), &t(inv(y))) {
                                *acc.entry(z).or_insert(0) += c;
                            }
                        }
                        let row = acc.into_iter().filter(|(_, c)| *c != 0).map(|(z, c)| (word(z), c as u64)).collect();
                        (word(x), row)
                    })
                    .collect(),
                circle: zero
                    .iter()
                    .flat_map(|&w| zero.iter().map(move |&w2| (w, w2)))
                    .map(|(w, w2)| (word(w), word(w2), conj_sum(&t(w), &t(w2)).into_iter().map(|(r, c)| (word(r), c)).collect()))
                    .collect(),
            }
        })
        .collect();

    Ok(GoldenGroup { group: sys.type_string().to_string(), order: n, nu: sys.nu(), kl: kl_entries(sys, |y, w| oracle.kl(y, w).clone()), cells })
}

fn kl_entries(sys: &CoxeterSystem, p: impl Fn(ElementId, ElementId) -> LaurentPoly) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for w in sys.elements() {
        for y in sys.elements() {
            let q = p(y, w);
            if y != w && !q.is_zero() {
                out.push((sys.format_word(y), sys.format_word(w), q.to_csv_string()));
            }
        }
    }
    out
}

/// The same tables read off the engine.
pub fn golden_from_engine(g: &Group) -> Result<GoldenGroup> {
    let sys = &g.sys;
    let word = |w: ElementId| sys.format_word(w);
    let mut cells = Vec::new();
    for cell in 0..g.cells.two_sided.len() {
        let tc = g.trunc(cell);
        let els = tc.elements();
        let mut psi = WordMap::new();
        for &x in els {
            psi.insert(word(x), tc.psi_x(x)?.into_iter().map(|(z, c)| (word(z), c)).collect());
        }
        let circle = tc
            .circle_table()?
            .into_iter()
            .map(|(w, w2, p): (ElementId, ElementId, JElement)| (word(w), word(w2), p.terms().iter().map(|(&r, &c)| (word(r), c)).collect()))
            .collect();
        cells.push(GoldenCell {
            a: tc.a(),
            elements: els.iter().map(|&w| word(w)).collect(),
            distinguished: tc.distinguished().iter().map(|&w| word(w)).collect(),
            c_zero: tc.c_zero().iter().map(|&w| word(w)).collect(),
            gamma: els
                .iter()
                .flat_map(|&x| sys.elements().map(move |y| (x, y)))
                .flat_map(|(x, y)| g.gamma.row(x, y).iter().map(move |&(z, c)| (x, y, z, c)))
                .map(|(x, y, z, c)| (word(x), word(y), word(z), c))
                .collect(),
            dim_hom: tc.dim_hom_matrix()?,
            psi,
            circle,
        });
    }
    Ok(GoldenGroup { group: sys.type_string().to_string(), order: sys.order(), nu: sys.nu(), kl: kl_entries(sys, |y, w| g.kl().p(y, w).clone()), cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_and_engine_agree_on_small_groups() {
        for t in ["A1", "A2", "B2", "I2(5)", "A1xA1"] {
            let g = Group::from_type(t).unwrap();
            assert_eq!(golden_from_oracle(&g.sys).unwrap(), golden_from_engine(&g).unwrap(), "{t}");
        }
    }

    #[test]
    fn a2_oracle_values() {
        let sys = CoxeterSystem::from_type("A2").unwrap();
        let gg = golden_from_oracle(&sys).unwrap();
        let a: Vec<u32> = gg.cells.iter().map(|c| c.a).collect();
        assert_eq!(a, [0, 1, 3]);
        let mid = &gg.cells[1];
        assert_eq!(mid.distinguished, ["s1", "s2"]);
        assert_eq!(mid.gamma.len(), 8);
    }
}
