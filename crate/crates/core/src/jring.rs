//! The asymptotic ring `J` with basis `t_z` and `t_x t_y = sum_z gamma_{x,y,z} t_z`,
//! its cell subrings, the trace form `tau`, the homomorphism
//! `psi: H -> A (x) J` and the dimension of the centre of `Q (x) J^c`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cells::{CellDecomposition, GammaTable};
use crate::coxeter::{CoxeterSystem, ElementId};
use crate::error::Result;
use crate::hecke::{Basis, Hecke, HeckeElement};
use crate::laurent::LaurentPoly;

/// An element of `J`: integer combination of the `t_z`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct JElement {
    terms: BTreeMap<ElementId, i64>,
}

impl JElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element `t_z`.
    pub fn t(z: ElementId) -> Self {
        Self::from_terms([(z, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ElementId, i64)>) -> Self {
        let mut out = Self::zero();
        for (z, c) in terms {
            out.add_term(z, c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<ElementId, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, z: ElementId) -> i64 {
        self.terms.get(&z).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, z: ElementId, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(z).or_insert(0);
        *e = e.checked_add(c).expect("J coefficient overflow");
        if *e == 0 {
            self.terms.remove(&z);
        }
    }

    pub fn add_scaled(&mut self, other: &JElement, c: i64) {
        for (&z, &k) in &other.terms {
            self.add_term(z, k.checked_mul(c).expect("J coefficient overflow"));
        }
    }

    pub fn support(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.terms.keys().copied()
    }
}

impl std::ops::Add<&JElement> for &JElement {
    type Output = JElement;
    fn add(self, rhs: &JElement) -> JElement {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

/// An element of `A (x) J`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AJElement {
    terms: BTreeMap<ElementId, LaurentPoly>,
}

impl AJElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<ElementId, LaurentPoly> {
        &self.terms
    }

    pub fn coefficient(&self, z: ElementId) -> LaurentPoly {
        self.terms.get(&z).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, z: ElementId, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(z).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&z);
        }
    }

    /// Specialization `v = 1`.
    pub fn at_one(&self) -> JElement {
        JElement::from_terms(self.terms.iter().map(|(&z, p)| {
            (z, i64::try_from(p.eval_one()).expect("coefficient fits in i64"))
        }))
    }
}

impl From<&JElement> for AJElement {
    fn from(j: &JElement) -> Self {
        let mut out = AJElement::zero();
        for (&z, &c) in j.terms() {
            out.add_term(z, &LaurentPoly::from(c));
        }
        out
    }
}

/// Multiplication in `J` and the maps around it, for one group.
#[derive(Clone)]
pub struct JRing {
    sys: Arc<CoxeterSystem>,
    cells: Arc<CellDecomposition>,
    gamma: Arc<GammaTable>,
}

impl JRing {
    pub fn new(sys: Arc<CoxeterSystem>, cells: Arc<CellDecomposition>, gamma: Arc<GammaTable>) -> Self {
        Self { sys, cells, gamma }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn cells(&self) -> &CellDecomposition {
        &self.cells
    }

    pub fn gamma(&self) -> &GammaTable {
        &self.gamma
    }

    /// `t_x t_y`.
    pub fn t_mul(&self, x: ElementId, y: ElementId) -> JElement {
        JElement::from_terms(self.gamma.row(x, y).iter().copied())
    }

    pub fn j_mul(&self, a: &JElement, b: &JElement) -> JElement {
        let mut out = JElement::zero();
        for (&x, &f) in a.terms() {
            for (&y, &g) in b.terms() {
                let fg = f.checked_mul(g).expect("J coefficient overflow");
                for &(z, c) in self.gamma.row(x, y) {
                    out.add_term(z, fg.checked_mul(c).expect("J coefficient overflow"));
                }
            }
        }
        out
    }

    /// `t_{w_1} ... t_{w_r}`, left to right.
    pub fn t_product(&self, seq: &[ElementId]) -> JElement {
        let Some((&first, rest)) = seq.split_first() else {
            return self.unit();
        };
        rest.iter().fold(JElement::t(first), |acc, &w| self.j_mul(&acc, &JElement::t(w)))
    }

    /// `sum_{d in D_c} t_d`, the unit of `J^c`.
    pub fn j_unit(&self, cell: usize) -> JElement {
        JElement::from_terms(self.cells.two_sided[cell].distinguished.iter().map(|&d| (d, 1)))
    }

    /// The unit of `J`: every distinguished involution.
    pub fn unit(&self) -> JElement {
        JElement::from_terms(self.cells.all_distinguished().into_iter().map(|d| (d, 1)))
    }

    /// `tau(t_z) = 1` on distinguished involutions, else 0.
    pub fn tau(&self, xi: &JElement) -> i64 {
        xi.terms().iter().filter(|(&z, _)| self.cells.is_distinguished(z)).map(|(_, &c)| c).sum()
    }

    pub fn aj_mul(&self, a: &AJElement, b: &AJElement) -> AJElement {
        let mut out = AJElement::zero();
        for (&x, f) in a.terms() {
            for (&y, g) in b.terms() {
                let row = self.gamma.row(x, y);
                if row.is_empty() {
                    continue;
                }
                let fg = f * g;
                for &(z, c) in row {
                    out.add_term(z, &fg.scale_i64(c));
                }
            }
        }
        out
    }

    /// `psi(c_w) = sum_{d in D, z : a(d) = a(z)} h_{w,d,z} t_z`, extended
    /// linearly over `A`.
    pub fn psi(&self, hecke: &Hecke, h: &HeckeElement) -> Result<AJElement> {
        if h.basis() != Basis::C {
            return Err(crate::error::Error::WrongBasis { expected: "c", found: "T" });
        }
        let dist = self.cells.all_distinguished();
        let mut out = AJElement::zero();
        for &d in &dist {
            let col = hecke.column(d);
            let ad = self.cells.a(d);
            for (&w, f) in h.terms() {
                for (&z, hz) in col[w].terms() {
                    if self.cells.a(z) == ad {
                        out.add_term(z, &(f * hz));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `psi(c_w)`.
    pub fn psi_basis(&self, hecke: &Hecke, w: ElementId) -> AJElement {
        self.psi(hecke, &HeckeElement::basis_element(Basis::C, w)).expect("c-basis input")
    }

    /// Dimension over `Q` of the centre of `Q (x) J^c`: the commutant of all
    /// `t_z`, `z` in the cell, solved exactly.
    pub fn center_dimension(&self, cell: usize) -> usize {
        let elements = &self.cells.two_sided[cell].elements;
        let m = elements.len();
        let pos: BTreeMap<ElementId, usize> = elements.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut echelon = RowEchelon::new(m);
        for &z in elements {
            // coefficient of t_w in (sum_x c_x t_x) t_z - t_z (sum_x c_x t_x)
            let mut rows: BTreeMap<ElementId, Vec<i64>> = BTreeMap::new();
            for (i, &x) in elements.iter().enumerate() {
                for &(w, g) in self.gamma.row(x, z) {
                    rows.entry(w).or_insert_with(|| vec![0; m])[i] += g;
                }
                for &(w, g) in self.gamma.row(z, x) {
                    rows.entry(w).or_insert_with(|| vec![0; m])[i] -= g;
                }
            }
            for (w, row) in rows {
                debug_assert!(pos.contains_key(&w));
                echelon.insert(&row);
            }
        }
        m - echelon.rank()
    }
}

/// Incremental row reduction over `Q`.
struct RowEchelon {
    width: usize,
    // (pivot column, row normalized so the pivot is 1)
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RowEchelon {
    fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, row: &[i64]) {
        let mut r: Vec<BigRational> = row.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        for (pivot, basis) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let f = r[*pivot].clone();
            for (a, b) in r.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        if let Some(p) = (0..self.width).find(|&i| !r[i].is_zero()) {
            let inv = BigRational::one() / r[p].clone();
            for a in r.iter_mut() {
                *a *= &inv;
            }
            // keep earlier rows reduced at the new pivot
            for (_, basis) in self.rows.iter_mut() {
                if basis[p].is_zero() {
                    continue;
                }
                let f = basis[p].clone();
                for (a, b) in basis.iter_mut().zip(&r) {
                    *a -= &f * b;
                }
            }
            self.rows.push((p, r));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::compute_cells;
    use crate::hecke::KlTable;

    fn build(t: &str) -> (Hecke, JRing) {
        let sys = Arc::new(CoxeterSystem::from_type(t).unwrap());
        let kl = Arc::new(KlTable::build(&sys));
        let hecke = Hecke::new(sys.clone(), kl);
        let cells = compute_cells(&hecke);
        let gamma = GammaTable::build(&hecke, &cells);
        (hecke, JRing::new(sys, Arc::new(cells), Arc::new(gamma)))
    }

    #[test]
    fn j_mul_examples() {
        let (_, j) = build("A1");
        assert_eq!(j.j_mul(&JElement::t(0), &JElement::t(0)), JElement::t(0));
        assert_eq!(j.j_mul(&JElement::t(1), &JElement::t(1)), JElement::t(1));
        let (_, j) = build("A2");
        let sys = j.system();
        let [s1, s1s2, s2s1] = ["s1", "s1s2", "s2s1"].map(|w| sys.parse_word(w).unwrap());
        assert_eq!(j.j_mul(&JElement::t(s1s2), &JElement::t(s2s1)), JElement::t(s1));
    }

    #[test]
    fn units() {
        let (_, j) = build("A1");
        assert_eq!(j.j_unit(0), JElement::t(0));
        let (_, j) = build("A2");
        let sys = j.system();
        let [s1, s2] = ["s1", "s2"].map(|w| sys.parse_word(w).unwrap());
        assert_eq!(j.j_unit(1), JElement::from_terms([(s1, 1), (s2, 1)]));
        for t in ["A2", "A3"] {
            let (_, j) = build(t);
            let one = j.unit();
            for z in j.system().elements() {
                let tz = JElement::t(z);
                assert_eq!(j.j_mul(&one, &tz), tz);
                assert_eq!(j.j_mul(&tz, &one), tz);
            }
        }
    }

    #[test]
    fn tau_examples() {
        let (_, j) = build("A2");
        let sys = j.system();
        let [s1, s1s2, s2s1] = ["s1", "s1s2", "s2s1"].map(|w| sys.parse_word(w).unwrap());
        assert_eq!(j.tau(&JElement::t(s1)), 1);
        assert_eq!(j.tau(&JElement::t(s1s2)), 0);
        assert_eq!(j.tau(&j.j_mul(&JElement::t(s1s2), &JElement::t(s2s1))), 1);
    }

    #[test]
    fn psi_examples() {
        let (hecke, j) = build("A1");
        let unit: AJElement = (&j.unit()).into();
        assert_eq!(j.psi_basis(&hecke, 0), unit);
        let mut expected = AJElement::zero();
        expected.add_term(1, &LaurentPoly::v_plus_inv());
        assert_eq!(j.psi_basis(&hecke, 1), expected);

        let (hecke, j) = build("A2");
        let n = j.system().order();
        for x in 0..n {
            for y in 0..n {
                let lhs = j.psi(&hecke, &hecke.product(x, y)).unwrap();
                let rhs = j.aj_mul(&j.psi_basis(&hecke, x), &j.psi_basis(&hecke, y));
                assert_eq!(lhs, rhs, "x={x} y={y}");
            }
        }
        assert!(j.psi(&hecke, &HeckeElement::basis_element(Basis::T, 0)).is_err());
    }

    #[test]
    fn center_dimensions() {
        let (_, j) = build("A2");
        assert_eq!(j.center_dimension(0), 1);
        assert_eq!(j.center_dimension(1), 1);
        assert_eq!(j.center_dimension(2), 1);
        let (_, j) = build("A3");
        for c in 0..j.cells().two_sided.len() {
            assert_eq!(j.center_dimension(c), 1);
        }
    }

    #[test]
    fn row_echelon_rank() {
        let mut e = RowEchelon::new(3);
        e.insert(&[1, 2, 3]);
        e.insert(&[2, 4, 6]);
        assert_eq!(e.rank(), 1);
        e.insert(&[0, 1, 1]);
        e.insert(&[1, 3, 4]);
        assert_eq!(e.rank(), 2);
        e.insert(&[0, 0, 5]);
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn centre_dimensions_count_irreducible_characters() {
        for (t, irreps) in [("B3", 10), ("H3", 10), ("D4", 13), ("I2(5)", 4), ("I2(6)", 6)] {
            let (_, j) = build(t);
            let total: usize = (0..j.cells().two_sided.len()).map(|c| j.center_dimension(c)).sum();
            assert_eq!(total, irreps, "{t}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use std::sync::OnceLock;

        fn b3() -> &'static (Hecke, JRing) {
            static RING: OnceLock<(Hecke, JRing)> = OnceLock::new();
            RING.get_or_init(|| build("B3"))
        }

        proptest! {
            #[test]
            fn j_and_hecke_products_associate(x in 0usize..48, y in 0usize..48, z in 0usize..48) {
                let (hecke, j) = b3();
                let (tx, ty, tz) = (JElement::t(x), JElement::t(y), JElement::t(z));
                prop_assert_eq!(j.j_mul(&j.j_mul(&tx, &ty), &tz), j.j_mul(&tx, &j.j_mul(&ty, &tz)));
                prop_assert_eq!(hecke.c_product(&[x, y, z]), hecke.c_product_rtl(&[x, y, z]));
            }

            #[test]
            fn psi_is_multiplicative(x in 0usize..48, y in 0usize..48) {
                let (hecke, j) = b3();
                let lhs = j.psi(hecke, &hecke.product(x, y)).unwrap();
                let rhs = j.aj_mul(&j.psi_basis(hecke, x), &j.psi_basis(hecke, y));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
