//! Dense T-basis reference computations.
//!
//! Nothing here touches the KL recursion or the cached `c_s` tables: `c_w` is
//! found as the unique bar-invariant element with the KL degree condition,
//! solved top-down against dense expansions of `bar(T_y)`, and products are
//! plain T-basis multiplication followed by a triangular solve.

use std::collections::BTreeMap;

use crate::coxeter::{CoxeterSystem, ElementId, Generator};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// Largest group the oracle accepts.
pub const ORACLE_MAX_ORDER: usize = 120;

type Dense = Vec<LaurentPoly>;

fn v_minus_inv() -> LaurentPoly {
    LaurentPoly::from_terms([(1, 1), (-1, -1)])
}

pub struct TBasisOracle<'a> {
    sys: &'a CoxeterSystem,
    // c[w] = dense T-coordinates of c_w
    c: Vec<Dense>,
}

impl<'a> TBasisOracle<'a> {
    pub fn new(sys: &'a CoxeterSystem) -> Result<Self> {
        let n = sys.order();
        if n > ORACLE_MAX_ORDER {
            return Err(Error::TooLarge { type_string: sys.type_string().into(), order: n.to_string(), bound: ORACLE_MAX_ORDER });
        }
        let bars = bar_t_all(sys);
        let mut by_length: Vec<ElementId> = sys.elements().collect();
        by_length.sort_by_key(|&w| (std::cmp::Reverse(sys.length(w)), w));
        let c = (0..n)
            .map(|w| {
                let mut p = vec![LaurentPoly::zero(); n];
                p[w] = LaurentPoly::one();
                // p_x - bar(p_x) = sum_{y > x} bar(p_y) r_{x,y}, where
                // bar(T_y) = sum_x r_{x,y} T_x; process x by decreasing length
                for &x in by_length.iter().filter(|&&x| sys.length(x) < sys.length(w)) {
                    let mut rhs = LaurentPoly::zero();
                    for y in 0..n {
                        if y != x && !p[y].is_zero() && !bars[y][x].is_zero() {
                            rhs += &(&p[y].bar() * &bars[y][x]);
                        }
                    }
                    p[x] = rhs.negative_part();
                }
                p
            })
            .collect();
        Ok(Self { sys, c })
    }

    pub fn system(&self) -> &CoxeterSystem {
        self.sys
    }

    /// `p_{y,w}`.
    pub fn kl(&self, y: ElementId, w: ElementId) -> &LaurentPoly {
        &self.c[w][y]
    }

    /// Dense T-coordinates of `c_w`.
    pub fn c_dense(&self, w: ElementId) -> &[LaurentPoly] {
        &self.c[w]
    }

    /// `T_s h` (left) on dense coordinates.
    fn t_s_left(&self, s: Generator, h: &Dense) -> Dense {
        let mut out = vec![LaurentPoly::zero(); h.len()];
        for (w, f) in h.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let sw = self.sys.left_mult(s, w);
            out[sw] += f;
            if self.sys.length(sw) < self.sys.length(w) {
                out[w] += &(f * &v_minus_inv());
            }
        }
        out
    }

    /// `T_x h`.
    fn t_left(&self, x: ElementId, h: &Dense) -> Dense {
        let mut out = h.clone();
        for &s in self.sys.word(x).iter().rev() {
            out = self.t_s_left(s, &out);
        }
        out
    }

    /// Dense T-coordinates of `c_x c_y`.
    pub fn product_dense(&self, x: ElementId, y: ElementId) -> Dense {
        let n = self.sys.order();
        let mut out = vec![LaurentPoly::zero(); n];
        let cy = &self.c[y];
        for (a, pa) in self.c[x].iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (z, f) in self.t_left(a, cy).iter().enumerate() {
                if !f.is_zero() {
                    out[z] += &(pa * f);
                }
            }
        }
        out
    }

    /// Rewrites dense T-coordinates in the c-basis by repeatedly peeling the
    /// longest remaining `T_z`.
    pub fn solve_c(&self, mut h: Dense) -> BTreeMap<ElementId, LaurentPoly> {
        let mut out = BTreeMap::new();
        loop {
            let top = (0..h.len()).filter(|&z| !h[z].is_zero()).max_by_key(|&z| (self.sys.length(z), z));
            let Some(z) = top else { break };
            let coeff = h[z].clone();
            for (y, p) in self.c[z].iter().enumerate() {
                if !p.is_zero() {
                    h[y] -= &(&coeff * p);
                }
            }
            out.insert(z, coeff);
        }
        out
    }

    /// `c_x c_y = sum_z h_{x,y,z} c_z`.
    pub fn product(&self, x: ElementId, y: ElementId) -> BTreeMap<ElementId, LaurentPoly> {
        self.solve_c(self.product_dense(x, y))
    }

    pub fn h(&self, x: ElementId, y: ElementId, z: ElementId) -> LaurentPoly {
        self.product(x, y).remove(&z).unwrap_or_else(LaurentPoly::zero)
    }
}

/// `bars[y][x]`: coefficient of `T_x` in `bar(T_y)`, from
/// `bar(T_{ys}) = bar(T_y) (T_s - (v - v^-1))`.
fn bar_t_all(sys: &CoxeterSystem) -> Vec<Dense> {
    let n = sys.order();
    let mut bars: Vec<Dense> = vec![Vec::new(); n];
    bars[0] = {
        let mut e = vec![LaurentPoly::zero(); n];
        e[0] = LaurentPoly::one();
        e
    };
    for y in 1..n {
        let word = sys.word(y);
        let s = *word.last().expect("nonidentity");
        let prev = sys.right_mult(y, s);
        let mut out = vec![LaurentPoly::zero(); n];
        for (w, f) in bars[prev].iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let ws = sys.right_mult(w, s);
            out[ws] += f;
            if sys.length(ws) < sys.length(w) {
                out[w] += &(f * &v_minus_inv());
            }
            out[w] -= &(f * &v_minus_inv());
        }
        bars[y] = out;
    }
    bars
}

/// `h_{x,y,z}` through the dense T-basis route alone.
pub fn tbasis_oracle_h(sys: &CoxeterSystem, x: ElementId, y: ElementId, z: ElementId) -> Result<LaurentPoly> {
    Ok(TBasisOracle::new(sys)?.h(x, y, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{Hecke, KlTable};
    use std::sync::Arc;

    fn hecke(t: &str) -> Hecke {
        let sys = Arc::new(CoxeterSystem::from_type(t).unwrap());
        let kl = Arc::new(KlTable::build(&sys));
        Hecke::new(sys, kl)
    }

    #[test]
    fn a1_h() {
        let sys = CoxeterSystem::from_type("A1").unwrap();
        assert_eq!(tbasis_oracle_h(&sys, 1, 1, 1).unwrap(), LaurentPoly::v_plus_inv());
        assert!(tbasis_oracle_h(&sys, 1, 1, 0).unwrap().is_zero());
    }

    #[test]
    fn kl_matches_engine() {
        for t in ["A2", "A3", "B3", "I2(7)", "A1xA2"] {
            let h = hecke(t);
            let o = TBasisOracle::new(h.system()).unwrap();
            for w in h.system().elements() {
                for y in h.system().elements() {
                    assert_eq!(o.kl(y, w), h.kl().p(y, w), "{t} p({y},{w})");
                }
            }
        }
    }

    #[test]
    fn a3_nontrivial_kl() {
        let sys = CoxeterSystem::from_type("A3").unwrap();
        let o = TBasisOracle::new(&sys).unwrap();
        let y = sys.parse_word("s2").unwrap();
        let w = sys.parse_word("s2s1s3s2").unwrap();
        assert_eq!(o.kl(y, w), &LaurentPoly::from_terms([(-1, 1), (-3, 1)]));
    }

    #[test]
    fn a2_all_products_match() {
        let h = hecke("A2");
        let o = TBasisOracle::new(h.system()).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(&o.product(x, y), h.product(x, y).terms(), "c_{x} c_{y}");
            }
        }
    }

    #[test]
    fn rejects_large_groups() {
        let sys = CoxeterSystem::from_type("A5").unwrap();
        assert!(matches!(TBasisOracle::new(&sys), Err(Error::TooLarge { .. })));
    }
}
