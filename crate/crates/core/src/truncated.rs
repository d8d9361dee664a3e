//! Multiplicities of truncated convolution, computed in the cell ring `J^c`.
//!
//! Every sum over `y` runs over the full two-sided cell. Arguments outside
//! the subset an operation is defined on are rejected, and a negative
//! multiplicity is reported as an error carrying the offending products.

use std::collections::BTreeMap;

use crate::coxeter::ElementId;
use crate::error::{Error, Result};
use crate::jring::{JElement, JRing};

/// A multiplicity table `z -> n`.
pub type Multiplicities = BTreeMap<ElementId, u64>;

/// One two-sided cell `c` of a group, with `a = a(c)`, `D_c` and `c^0`.
#[derive(Clone)]
pub struct TruncContext {
    ring: JRing,
    cell: usize,
    a: u32,
    elements: Vec<ElementId>,
    distinguished: Vec<ElementId>,
    c_zero: Vec<ElementId>,
}

impl TruncContext {
    pub fn new(ring: JRing, cell: usize) -> Self {
        let c = &ring.cells().two_sided[cell];
        let (a, elements, distinguished, c_zero) =
            (c.a, c.elements.clone(), c.distinguished.clone(), c.c_zero.clone());
        Self { ring, cell, a, elements, distinguished, c_zero }
    }

    pub fn ring(&self) -> &JRing {
        &self.ring
    }

    pub fn cell(&self) -> usize {
        self.cell
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn distinguished(&self) -> &[ElementId] {
        &self.distinguished
    }

    pub fn c_zero(&self) -> &[ElementId] {
        &self.c_zero
    }

    pub fn contains(&self, w: ElementId) -> bool {
        self.elements.binary_search(&w).is_ok()
    }

    pub fn in_c_zero(&self, w: ElementId) -> bool {
        self.c_zero.binary_search(&w).is_ok()
    }

    fn require_cell(&self, w: ElementId) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::OutsideCell { element: self.ring.system().format_word(w), subset: "the two-sided cell" })
        }
    }

    fn require_c_zero(&self, w: ElementId) -> Result<()> {
        if self.in_c_zero(w) {
            Ok(())
        } else {
            Err(Error::OutsideCell { element: self.ring.system().format_word(w), subset: "c^0" })
        }
    }

    fn t(&self, w: ElementId) -> JElement {
        JElement::t(w)
    }

    fn inv(&self, w: ElementId) -> ElementId {
        self.ring.system().inverse(w)
    }

    fn to_multiplicities(&self, xi: &JElement, context: impl Fn() -> String) -> Result<Multiplicities> {
        let mut out = Multiplicities::new();
        for (&z, &c) in xi.terms() {
            if c < 0 {
                return Err(Error::NegativeMultiplicity {
                    value: c,
                    context: format!("{} at t_{}", context(), self.ring.system().format_word(z)),
                });
            }
            out.insert(z, c as u64);
        }
        Ok(out)
    }

    /// `sum_{y in c} t_y t_x t_{y^-1} = sum_z psi_x(z) t_z`.
    pub fn psi_x(&self, x: ElementId) -> Result<Multiplicities> {
        self.require_cell(x)?;
        let mut total = JElement::zero();
        for &y in &self.elements {
            let p = self.ring.j_mul(&self.ring.j_mul(&self.t(y), &self.t(x)), &self.t(self.inv(y)));
            total.add_scaled(&p, 1);
        }
        let sys = self.ring.system();
        self.to_multiplicities(&total, || format!("sum_y t_y t_{} t_y^-1", sys.format_word(x)))
    }

    /// `sum_{y in c} tau(t_{y^-1} t_z t_y t_{u^-1})`.
    pub fn dim_hom(&self, z: ElementId, u: ElementId) -> Result<u64> {
        self.require_cell(z)?;
        self.require_cell(u)?;
        let mut total = 0i64;
        for &y in &self.elements {
            let p = self.ring.t_product(&[self.inv(y), z, y, self.inv(u)]);
            total += self.ring.tau(&p);
        }
        if total < 0 {
            let sys = self.ring.system();
            return Err(Error::NegativeMultiplicity {
                value: total,
                context: format!("dim_hom({}, {})", sys.format_word(z), sys.format_word(u)),
            });
        }
        Ok(total as u64)
    }

    /// The full matrix `dim_hom(z, u)` over the sorted cell elements.
    pub fn dim_hom_matrix(&self) -> Result<Vec<Vec<u64>>> {
        self.elements
            .iter()
            .map(|&z| self.elements.iter().map(|&u| self.dim_hom(z, u)).collect())
            .collect()
    }

    /// Coefficient of `t_w` in `t_{w_1} ... t_{w_r}`, i.e. `N(w, -(r-1)a)`.
    pub fn conv_multiplicity(&self, seq: &[ElementId], w: ElementId) -> Result<u64> {
        if seq.is_empty() {
            return Err(Error::OutsideCell { element: "empty sequence".into(), subset: "the two-sided cell" });
        }
        for &x in seq {
            self.require_cell(x)?;
        }
        self.require_cell(w)?;
        let c = self.ring.t_product(seq).coefficient(w);
        if c < 0 {
            return Err(Error::NegativeMultiplicity { value: c, context: format!("t-product {seq:?}") });
        }
        Ok(c as u64)
    }

    /// `xi o xi' = sum_{y in c} xi t_y xi' t_{y^-1}` on `J_0^c`.
    pub fn circle(&self, xi: &JElement, xi2: &JElement) -> Result<JElement> {
        for w in xi.support().chain(xi2.support()) {
            self.require_c_zero(w)?;
        }
        let mut total = JElement::zero();
        for &y in &self.elements {
            let left = self.ring.j_mul(xi, &self.t(y));
            let mid = self.ring.j_mul(&left, xi2);
            total.add_scaled(&self.ring.j_mul(&mid, &self.t(self.inv(y))), 1);
        }
        Ok(total)
    }

    /// `t_w o t_w'` for all `w, w'` in `c^0`.
    pub fn circle_table(&self) -> Result<Vec<(ElementId, ElementId, JElement)>> {
        let mut out = Vec::new();
        for &w in &self.c_zero {
            for &w2 in &self.c_zero {
                out.push((w, w2, self.circle(&self.t(w), &self.t(w2))?));
            }
        }
        Ok(out)
    }

    /// Coefficients `n(r)` in `sum_{y in c} t_u t_y t_z t_{y^-1} = sum_r n(r) t_r`,
    /// for `z, u` in `c^0`. The support is checked to lie in `c^0`.
    pub fn conv_ring_decomposition(&self, z: ElementId, u: ElementId) -> Result<Multiplicities> {
        self.require_c_zero(z)?;
        self.require_c_zero(u)?;
        let mut total = JElement::zero();
        for &y in &self.elements {
            total.add_scaled(&self.ring.t_product(&[u, y, z, self.inv(y)]), 1);
        }
        let sys = self.ring.system();
        let ctx = || format!("sum_y t_{} t_y t_{} t_y^-1", sys.format_word(u), sys.format_word(z));
        let out = self.to_multiplicities(&total, ctx)?;
        if let Some(&r) = out.keys().find(|&&r| !self.in_c_zero(r)) {
            return Err(Error::OutsideCell { element: sys.format_word(r), subset: "c^0 (decomposition support)" });
        }
        Ok(out)
    }
}
