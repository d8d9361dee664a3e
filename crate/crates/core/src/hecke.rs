//! The equal-parameter Hecke algebra in the standard and Kazhdan-Lusztig
//! bases.
//!
//! Conventions: `(T_s - v)(T_s + v^-1) = 0`, `c_s = T_s + v^-1 T_e`, and
//! `c_w = sum_y p_{y,w} T_y` with `p_{w,w} = 1` and `p_{y,w}` in `v^-1 Z[v^-1]`
//! for `y < w`. The KL polynomials are built by the left-descent recursion
//! with the `mu` correction. Products `c_x c_y` never leave the c-basis: they
//! are folded through the table of `c_s c_w`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::coxeter::{CoxeterSystem, ElementId, Generator};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Standard basis `T_w`.
    T,
    /// Kazhdan-Lusztig basis `c_w`.
    C,
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::T => "T",
            Basis::C => "c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A finite linear combination of `T_w` or `c_w` over `Z[v, v^-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    basis: Basis,
    terms: BTreeMap<ElementId, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, terms: BTreeMap::new() }
    }

    /// The single basis vector `T_w` or `c_w`.
    pub fn basis_element(basis: Basis, w: ElementId) -> Self {
        Self::monomial(basis, w, LaurentPoly::one())
    }

    pub fn monomial(basis: Basis, w: ElementId, coeff: LaurentPoly) -> Self {
        let mut h = Self::zero(basis);
        h.add_term(w, &coeff);
        h
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<ElementId, LaurentPoly> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<ElementId, LaurentPoly> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: ElementId) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn coefficient_ref(&self, w: ElementId) -> Option<&LaurentPoly> {
        self.terms.get(&w)
    }

    pub fn add_term(&mut self, w: ElementId, coeff: &LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_default();
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// `self += factor * other`; both must be in the same basis.
    pub fn add_scaled(&mut self, other: &HeckeElement, factor: &LaurentPoly) {
        debug_assert_eq!(self.basis, other.basis);
        if factor.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            let prod = if factor.is_one() { c.clone() } else { c * factor };
            self.add_term(*w, &prod);
        }
    }

    pub fn scaled(&self, factor: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.basis);
        out.add_scaled(self, factor);
        out
    }

    fn expect_basis(&self, basis: Basis) -> Result<()> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(Error::WrongBasis { expected: basis.name(), found: self.basis.name() })
        }
    }
}

/// `T_s * h` (or `h * T_s`) in the T-basis:
/// `T_s T_w = T_{sw}` if `sw > w`, else `T_{sw} + (v - v^-1) T_w`.
pub fn t_mul_gen(sys: &CoxeterSystem, h: &HeckeElement, s: Generator, side: Side) -> Result<HeckeElement> {
    h.expect_basis(Basis::T)?;
    let v_minus = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
    let mut out = HeckeElement::zero(Basis::T);
    for (&w, c) in &h.terms {
        let sw = match side {
            Side::Left => sys.left_mult(s, w),
            Side::Right => sys.right_mult(w, s),
        };
        out.add_term(sw, c);
        if sys.length(sw) < sys.length(w) {
            out.add_term(w, &(c * &v_minus));
        }
    }
    Ok(out)
}

/// Kazhdan-Lusztig polynomials `p_{y,w}` for a whole group, with `mu`.
#[derive(Debug, Clone)]
pub struct KlTable {
    // rows[w][y] = p_{y,w}
    rows: Vec<Vec<LaurentPoly>>,
    // mu[w] = [(y, mu(y, w))] for y < w with mu != 0
    mu: Vec<Vec<(ElementId, i64)>>,
    computed: usize,
}

impl KlTable {
    /// Runs the recursion for every `w`, one length layer at a time; the
    /// rows of a layer only read shorter rows, so they are built in parallel.
    pub fn build(sys: &CoxeterSystem) -> Self {
        let n = sys.order();
        let mut rows: Vec<Vec<LaurentPoly>> = vec![Vec::new(); n];
        let mut mu: Vec<Vec<(ElementId, i64)>> = vec![Vec::new(); n];
        let counter = AtomicUsize::new(0);
        rows[0] = unit_row(n, 0);
        let mut start = 1;
        while start < n {
            let len = sys.length(start);
            let end = (start..n).find(|&w| sys.length(w) != len).unwrap_or(n);
            let layer: Vec<(Vec<LaurentPoly>, Vec<(ElementId, i64)>)> = (start..end)
                .into_par_iter()
                .map(|w| {
                    let row = kl_row(sys, &rows, &mu, w);
                    counter.fetch_add(row.iter().filter(|p| !p.is_zero()).count(), Ordering::Relaxed);
                    let m = mu_of_row(sys, &row, w);
                    (row, m)
                })
                .collect();
            for (offset, (row, m)) in layer.into_iter().enumerate() {
                rows[start + offset] = row;
                mu[start + offset] = m;
            }
            start = end;
        }
        counter.fetch_add(1, Ordering::Relaxed);
        Self { rows, mu, computed: counter.into_inner() }
    }

    /// Rebuilds a table from stored `(y, w, p_{y,w})` entries, e.g. from the
    /// cache. Nothing is recomputed.
    pub fn from_entries<I>(sys: &CoxeterSystem, entries: I) -> Self
    where
        I: IntoIterator<Item = (ElementId, ElementId, LaurentPoly)>,
    {
        let n = sys.order();
        let mut rows = vec![vec![LaurentPoly::zero(); n]; n];
        for (y, w, p) in entries {
            rows[w][y] = p;
        }
        let mu = (0..n).map(|w| mu_of_row(sys, &rows[w], w)).collect();
        Self { rows, mu, computed: 0 }
    }

    /// Number of polynomials produced by the recursion in this process;
    /// zero for tables loaded from the cache.
    pub fn computed_entries(&self) -> usize {
        self.computed
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// `p_{y,w}`.
    pub fn p(&self, y: ElementId, w: ElementId) -> &LaurentPoly {
        &self.rows[w][y]
    }

    /// `mu(y, w)`, the coefficient of `v^-1` in `p_{y,w}`.
    pub fn mu(&self, y: ElementId, w: ElementId) -> i64 {
        if y == w {
            0
        } else {
            self.rows[w][y].coefficient_i64(-1)
        }
    }

    /// Nonzero `mu(y, w)` for `y < w`.
    pub fn mu_row(&self, w: ElementId) -> &[(ElementId, i64)] {
        &self.mu[w]
    }

    /// All nonzero entries `(y, w, p_{y,w})`, sorted by `(w, y)`.
    pub fn entries(&self) -> impl Iterator<Item = (ElementId, ElementId, &LaurentPoly)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(w, row)| row.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(move |(y, p)| (y, w, p)))
    }
}

fn unit_row(n: usize, w: ElementId) -> Vec<LaurentPoly> {
    let mut row = vec![LaurentPoly::zero(); n];
    row[w] = LaurentPoly::one();
    row
}

fn mu_of_row(sys: &CoxeterSystem, row: &[LaurentPoly], w: ElementId) -> Vec<(ElementId, i64)> {
    sys.bruhat_below(w)
        .filter(|&y| y != w)
        .filter_map(|y| {
            let m = row[y].coefficient_i64(-1);
            (m != 0).then_some((y, m))
        })
        .collect()
}

/// `c_w = c_s c_{sw} - sum_{z < sw, sz < z} mu(z, sw) c_z` with `s` the
/// smallest left descent of `w`, read off coefficientwise in the T-basis.
fn kl_row(sys: &CoxeterSystem, rows: &[Vec<LaurentPoly>], mu: &[Vec<(ElementId, i64)>], w: ElementId) -> Vec<LaurentPoly> {
    let n = sys.order();
    let s = sys.word(w)[0];
    let u = sys.left_mult(s, w);
    let corrections: Vec<(ElementId, i64)> = mu[u].iter().copied().filter(|&(z, _)| sys.is_left_descent(s, z)).collect();
    let mut row = vec![LaurentPoly::zero(); n];
    for y in sys.bruhat_below(w) {
        let sy = sys.left_mult(s, y);
        let shift = if sys.length(sy) < sys.length(y) { 1 } else { -1 };
        let mut p = &rows[u][sy] + &rows[u][y].shift(shift);
        for &(z, m) in &corrections {
            let pz = &rows[z][y];
            if !pz.is_zero() {
                p -= &pz.scale_i64(m);
            }
        }
        row[y] = p;
    }
    row
}

/// The KL basis element `c_w` expanded in the T-basis.
pub fn c_basis(sys: &CoxeterSystem, kl: &KlTable, w: ElementId) -> HeckeElement {
    let mut h = HeckeElement::zero(Basis::T);
    for y in sys.bruhat_below(w) {
        h.add_term(y, kl.p(y, w));
    }
    h
}

/// Rewrites a T-basis element in the c-basis by peeling off the longest
/// term: `c_w` has leading term `T_w`.
pub fn to_c_basis(sys: &CoxeterSystem, kl: &KlTable, h: &HeckeElement) -> Result<HeckeElement> {
    h.expect_basis(Basis::T)?;
    // Ids are sorted by length, so the largest id is a longest term.
    let mut rest = h.terms.clone();
    let mut out = HeckeElement::zero(Basis::C);
    while let Some((&w, _)) = rest.iter().next_back() {
        let f = rest.remove(&w).expect("present");
        for y in sys.bruhat_below(w).filter(|&y| y != w) {
            let p = kl.p(y, w);
            if p.is_zero() {
                continue;
            }
            let entry = rest.entry(y).or_default();
            *entry -= &(p * &f);
            if entry.is_zero() {
                rest.remove(&y);
            }
        }
        out.add_term(w, &f);
    }
    Ok(out)
}

/// `bar` on the T-basis: `bar(f T_w) = bar(f) T_{w^-1}^{-1}`.
pub fn bar_t(sys: &CoxeterSystem, h: &HeckeElement) -> Result<HeckeElement> {
    h.expect_basis(Basis::T)?;
    let mut cache: BTreeMap<ElementId, HeckeElement> = BTreeMap::new();
    let mut out = HeckeElement::zero(Basis::T);
    for (&w, f) in &h.terms {
        let bw = bar_of_t(sys, w, &mut cache);
        out.add_scaled(&bw, &f.bar());
    }
    Ok(out)
}

fn bar_of_t(sys: &CoxeterSystem, w: ElementId, cache: &mut BTreeMap<ElementId, HeckeElement>) -> HeckeElement {
    if let Some(h) = cache.get(&w) {
        return h.clone();
    }
    let h = if w == 0 {
        HeckeElement::basis_element(Basis::T, 0)
    } else {
        // bar(T_w) = bar(T_s) bar(T_{sw}), bar(T_s) = T_s - (v - v^-1).
        let s = sys.word(w)[0];
        let rest = bar_of_t(sys, sys.left_mult(s, w), cache);
        let mut h = t_mul_gen(sys, &rest, s, Side::Left).expect("T-basis");
        h.add_scaled(&rest, &LaurentPoly::from_terms([(1, -1), (-1, 1)]));
        h
    };
    cache.insert(w, h.clone());
    h
}

/// Structure constants `h_{x,y,z}` of the c-basis, with all products for a
/// fixed right factor `y` computed together and memoized.
pub struct Hecke {
    sys: Arc<CoxeterSystem>,
    kl: Arc<KlTable>,
    columns: Vec<OnceLock<Arc<Vec<HeckeElement>>>>,
}

impl Hecke {
    pub fn new(sys: Arc<CoxeterSystem>, kl: Arc<KlTable>) -> Self {
        let columns = (0..sys.order()).map(|_| OnceLock::new()).collect();
        Self { sys, kl, columns }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn kl(&self) -> &KlTable {
        &self.kl
    }

    pub fn c_basis(&self, w: ElementId) -> HeckeElement {
        c_basis(&self.sys, &self.kl, w)
    }

    pub fn to_c_basis(&self, h: &HeckeElement) -> Result<HeckeElement> {
        to_c_basis(&self.sys, &self.kl, h)
    }

    /// `c_s c_w` as `(z, coefficient)` pairs.
    pub fn cs_left(&self, s: Generator, w: ElementId) -> Vec<(ElementId, LaurentPoly)> {
        let sys = &*self.sys;
        let sw = sys.left_mult(s, w);
        if sys.length(sw) < sys.length(w) {
            return vec![(w, LaurentPoly::v_plus_inv())];
        }
        let mut out = vec![(sw, LaurentPoly::one())];
        for &(z, m) in self.kl.mu_row(w) {
            if sys.is_left_descent(s, z) {
                out.push((z, LaurentPoly::from(m)));
            }
        }
        out
    }

    /// `c_w c_s` as `(z, coefficient)` pairs.
    pub fn cs_right(&self, w: ElementId, s: Generator) -> Vec<(ElementId, LaurentPoly)> {
        let sys = &*self.sys;
        let ws = sys.right_mult(w, s);
        if sys.length(ws) < sys.length(w) {
            return vec![(w, LaurentPoly::v_plus_inv())];
        }
        let mut out = vec![(ws, LaurentPoly::one())];
        for &(z, m) in self.kl.mu_row(w) {
            if sys.is_right_descent(z, s) {
                out.push((z, LaurentPoly::from(m)));
            }
        }
        out
    }

    /// `c_s h` for `h` in the c-basis.
    pub fn cs_left_mul(&self, s: Generator, h: &HeckeElement) -> HeckeElement {
        debug_assert_eq!(h.basis, Basis::C);
        let mut out = HeckeElement::zero(Basis::C);
        for (&w, f) in &h.terms {
            for (z, c) in self.cs_left(s, w) {
                out.add_term(z, &(f * &c));
            }
        }
        out
    }

    /// `[c_x c_y for every x]`.
    pub fn column(&self, y: ElementId) -> Arc<Vec<HeckeElement>> {
        self.columns[y].get_or_init(|| Arc::new(self.build_column(y))).clone()
    }

    fn build_column(&self, y: ElementId) -> Vec<HeckeElement> {
        let sys = &*self.sys;
        let n = sys.order();
        let mut col: Vec<HeckeElement> = Vec::with_capacity(n);
        col.push(HeckeElement::basis_element(Basis::C, y));
        for x in 1..n {
            // c_x = c_s c_u - sum mu(z, u) c_z over z < u with sz < z.
            let s = sys.word(x)[0];
            let u = sys.left_mult(s, x);
            let mut p = self.cs_left_mul(s, &col[u]);
            for &(z, m) in self.kl.mu_row(u) {
                if sys.is_left_descent(s, z) {
                    p.add_scaled(&col[z], &LaurentPoly::from(-m));
                }
            }
            col.push(p);
        }
        col
    }

    /// Fills every column, in parallel.
    pub fn precompute_all(&self) {
        (0..self.sys.order()).into_par_iter().for_each(|y| {
            self.column(y);
        });
    }

    /// `c_x c_y` in the c-basis.
    pub fn product(&self, x: ElementId, y: ElementId) -> HeckeElement {
        self.column(y)[x].clone()
    }

    /// The structure constant `h_{x,y,z}`.
    pub fn h_const(&self, x: ElementId, y: ElementId, z: ElementId) -> LaurentPoly {
        self.column(y)[x].coefficient(z)
    }

    /// Product of two c-basis elements.
    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
        a.expect_basis(Basis::C)?;
        b.expect_basis(Basis::C)?;
        let mut out = HeckeElement::zero(Basis::C);
        for (&y, g) in &b.terms {
            let col = self.column(y);
            for (&x, f) in &a.terms {
                out.add_scaled(&col[x], &(f * g));
            }
        }
        Ok(out)
    }

    /// `c_{w_1} ... c_{w_r} = sum_w phi_w c_w`, evaluated left to right.
    pub fn c_product(&self, seq: &[ElementId]) -> HeckeElement {
        let Some((&first, rest)) = seq.split_first() else {
            return HeckeElement::basis_element(Basis::C, 0);
        };
        let mut acc = HeckeElement::basis_element(Basis::C, first);
        for &w in rest {
            let col = self.column(w);
            let mut next = HeckeElement::zero(Basis::C);
            for (&x, f) in &acc.terms {
                next.add_scaled(&col[x], f);
            }
            acc = next;
        }
        acc
    }

    /// The same product evaluated right to left.
    pub fn c_product_rtl(&self, seq: &[ElementId]) -> HeckeElement {
        let Some((&last, rest)) = seq.split_last() else {
            return HeckeElement::basis_element(Basis::C, 0);
        };
        let mut acc = HeckeElement::basis_element(Basis::C, last);
        for &w in rest.iter().rev() {
            let mut next = HeckeElement::zero(Basis::C);
            for (&y, f) in &acc.terms {
                next.add_scaled(&self.column(y)[w], f);
            }
            acc = next;
        }
        acc
    }
}
