//! Left, right and two-sided cells, the `a`-function, the constants
//! `gamma_{x,y,z}` (the `v^{-a(z)}` coefficient of `h_{x,y,z}`), distinguished
//! involutions and the subsets `c^0`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use crate::coxeter::{CoxeterSystem, ElementId};
use crate::hecke::Hecke;

/// A partition of the group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Sorted id lists, ordered by smallest element.
    pub cells: Vec<Vec<ElementId>>,
    pub cell_of: Vec<usize>,
}

impl Partition {
    fn from_classes(n: usize, mut classes: Vec<Vec<ElementId>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        let mut cell_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &w in c {
                cell_of[w] = i;
            }
        }
        Self { cells: classes, cell_of }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn same(&self, x: ElementId, y: ElementId) -> bool {
        self.cell_of[x] == self.cell_of[y]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedCell {
    pub elements: Vec<ElementId>,
    pub a: u32,
    /// Indices into [`CellDecomposition::left`].
    pub left_cells: Vec<usize>,
    pub right_cells: Vec<usize>,
    /// `D_c`.
    pub distinguished: Vec<ElementId>,
    /// `c^0 = {z in c : z ~_L z^-1}`.
    pub c_zero: Vec<ElementId>,
}

impl TwoSidedCell {
    pub fn contains(&self, w: ElementId) -> bool {
        self.elements.binary_search(&w).is_ok()
    }

    pub fn in_c_zero(&self, w: ElementId) -> bool {
        self.c_zero.binary_search(&w).is_ok()
    }
}

/// The three readings of `a(z)` the engine computes, kept so the property
/// suite can compare them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AFunction {
    /// `max_{x,y} deg h_{x,y,z}` over all of `W x W`.
    pub max_degree: Vec<u32>,
    /// `-min_{x,y} val h_{x,y,z}`.
    pub neg_min_valuation: Vec<u32>,
    /// The same maximum restricted to `x, y` in the two-sided cell of `z`.
    pub within_cell: Vec<u32>,
}

impl AFunction {
    /// Scans every product `c_x c_y`.
    pub fn compute(hecke: &Hecke, two_sided_of: &[usize]) -> Self {
        let n = hecke.system().order();
        let init = || (vec![0i64; n], vec![0i64; n], vec![0i64; n]);
        let (maxd, minv, within) = (0..n)
            .into_par_iter()
            .fold(init, |(mut maxd, mut minv, mut within), y| {
                let col = hecke.column(y);
                for (x, prod) in col.iter().enumerate() {
                    let same_xy = two_sided_of[x] == two_sided_of[y];
                    for (&z, h) in prod.terms() {
                        let d = h.degree().unwrap() as i64;
                        let v = h.valuation().unwrap() as i64;
                        maxd[z] = maxd[z].max(d);
                        minv[z] = minv[z].min(v);
                        if same_xy && two_sided_of[x] == two_sided_of[z] {
                            within[z] = within[z].max(d);
                        }
                    }
                }
                (maxd, minv, within)
            })
            .reduce(init, |(a1, b1, c1), (a2, b2, c2)| {
                (
                    a1.iter().zip(&a2).map(|(p, q)| *p.max(q)).collect(),
                    b1.iter().zip(&b2).map(|(p, q)| *p.min(q)).collect(),
                    c1.iter().zip(&c2).map(|(p, q)| *p.max(q)).collect(),
                )
            });
        Self {
            max_degree: maxd.into_iter().map(|d| d as u32).collect(),
            neg_min_valuation: minv.into_iter().map(|v| (-v) as u32).collect(),
            within_cell: within.into_iter().map(|d| d as u32).collect(),
        }
    }

    pub fn a(&self, z: ElementId) -> u32 {
        self.max_degree[z]
    }
}

#[derive(Debug, Clone)]
pub struct CellDecomposition {
    pub left: Partition,
    pub right: Partition,
    pub two_sided: Vec<TwoSidedCell>,
    pub two_sided_of: Vec<usize>,
    /// `leq[i][j]`: cell `i` is below or equal to cell `j` in the two-sided
    /// preorder.
    pub leq: Vec<Vec<bool>>,
    pub a_function: AFunction,
    /// For each element, the coefficient of `v^{-a}` in `p_{1,w}`.
    pub p1_top_coefficient: Vec<i64>,
}

impl CellDecomposition {
    pub fn a(&self, z: ElementId) -> u32 {
        self.a_function.a(z)
    }

    pub fn cell_of(&self, z: ElementId) -> &TwoSidedCell {
        &self.two_sided[self.two_sided_of[z]]
    }

    pub fn same_two_sided(&self, x: ElementId, y: ElementId) -> bool {
        self.two_sided_of[x] == self.two_sided_of[y]
    }

    /// All distinguished involutions, sorted.
    pub fn all_distinguished(&self) -> Vec<ElementId> {
        let mut d: Vec<ElementId> = self.two_sided.iter().flat_map(|c| c.distinguished.iter().copied()).collect();
        d.sort_unstable();
        d
    }

    pub fn is_distinguished(&self, w: ElementId) -> bool {
        self.cell_of(w).distinguished.binary_search(&w).is_ok()
    }
}

/// Edges `x -> z` for every `z != x` with `c_z` in `c_s c_x` (left) or
/// `c_x c_s` (right).
fn preorder_edges(hecke: &Hecke, left: bool, right: bool) -> Vec<(ElementId, ElementId)> {
    let sys = hecke.system();
    let mut edges = Vec::new();
    for x in sys.elements() {
        for s in 0..sys.rank() {
            if left {
                edges.extend(hecke.cs_left(s, x).into_iter().filter(|(z, _)| *z != x).map(|(z, _)| (x, z)));
            }
            if right {
                edges.extend(hecke.cs_right(x, s).into_iter().filter(|(z, _)| *z != x).map(|(z, _)| (x, z)));
            }
        }
    }
    edges
}

fn strongly_connected(n: usize, edges: &[(ElementId, ElementId)]) -> Vec<Vec<ElementId>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(a, b) in edges {
        g.add_edge(nodes[a], nodes[b], ());
    }
    tarjan_scc(&g).into_iter().map(|c| c.into_iter().map(|ix| ix.index()).collect()).collect()
}

/// Left, right and two-sided cells from the generator-multiplication
/// preorders, plus the `a`-function over all products.
pub fn compute_cells(hecke: &Hecke) -> CellDecomposition {
    let sys = hecke.system();
    let n = sys.order();
    let left = Partition::from_classes(n, strongly_connected(n, &preorder_edges(hecke, true, false)));
    let right = Partition::from_classes(n, strongly_connected(n, &preorder_edges(hecke, false, true)));
    let lr_edges = preorder_edges(hecke, true, true);
    let raw_two = Partition::from_classes(n, strongly_connected(n, &lr_edges));

    let raw_of = raw_two.cell_of.clone();
    let a_function = AFunction::compute(hecke, &raw_of);

    // Order two-sided cells by (a, smallest id).
    let mut order: Vec<usize> = (0..raw_two.len()).collect();
    order.sort_by_key(|&i| (a_function.a(raw_two.cells[i][0]), raw_two.cells[i][0]));
    let mut rank_of = vec![0; raw_two.len()];
    for (new, &old) in order.iter().enumerate() {
        rank_of[old] = new;
    }
    let two_sided_of: Vec<usize> = raw_of.iter().map(|&c| rank_of[c]).collect();

    // Reachability between two-sided cells: z below x when z is reachable
    // from x.
    let k = order.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for &(x, z) in &lr_edges {
        let (cx, cz) = (two_sided_of[x], two_sided_of[z]);
        if cx != cz {
            succ[cx].insert(cz);
        }
    }
    let mut leq = vec![vec![false; k]; k];
    for top in 0..k {
        let mut stack = vec![top];
        while let Some(c) = stack.pop() {
            if leq[c][top] {
                continue;
            }
            leq[c][top] = true;
            stack.extend(succ[c].iter().copied());
        }
    }

    let p1_top_coefficient: Vec<i64> =
        (0..n).map(|w| hecke.kl().p(0, w).coefficient_i64(-(a_function.a(w) as i32))).collect();

    let two_sided = order
        .iter()
        .map(|&old| {
            let elements = raw_two.cells[old].clone();
            let a = a_function.a(elements[0]);
            let mut left_cells: Vec<usize> = elements.iter().map(|&w| left.cell_of[w]).collect();
            left_cells.sort_unstable();
            left_cells.dedup();
            let mut right_cells: Vec<usize> = elements.iter().map(|&w| right.cell_of[w]).collect();
            right_cells.sort_unstable();
            right_cells.dedup();
            let distinguished = elements.iter().copied().filter(|&d| p1_top_coefficient[d] != 0).collect();
            let c_zero = elements.iter().copied().filter(|&z| left.same(z, sys.inverse(z))).collect();
            TwoSidedCell { elements, a, left_cells, right_cells, distinguished, c_zero }
        })
        .collect();

    CellDecomposition { left, right, two_sided, two_sided_of, leq, a_function, p1_top_coefficient }
}

/// The constants `gamma_{x,y,z}`, stored sparsely per pair `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    n: usize,
    // rows[x * n + y] = [(z, gamma)], z ascending, nonzero only
    rows: Vec<Vec<(ElementId, i64)>>,
}

impl GammaTable {
    /// Extracts `gamma` from every product `c_x c_y`.
    pub fn build(hecke: &Hecke, cells: &CellDecomposition) -> Self {
        let n = hecke.system().order();
        let columns: Vec<Vec<Vec<(ElementId, i64)>>> = (0..n)
            .into_par_iter()
            .map(|y| {
                let col = hecke.column(y);
                col.iter()
                    .map(|prod| {
                        prod.terms()
                            .iter()
                            .filter_map(|(&z, h)| {
                                let g = h.coefficient(-(cells.a(z) as i32));
                                (!g.is_zero()).then(|| (z, i64::try_from(g).expect("gamma fits in i64")))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut rows = vec![Vec::new(); n * n];
        for (y, col) in columns.into_iter().enumerate() {
            for (x, entries) in col.into_iter().enumerate() {
                rows[x * n + y] = entries;
            }
        }
        Self { n, rows }
    }

    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = (ElementId, ElementId, ElementId, i64)>) -> Self {
        let mut map: BTreeMap<(ElementId, ElementId), BTreeMap<ElementId, i64>> = BTreeMap::new();
        for (x, y, z, g) in triples {
            *map.entry((x, y)).or_default().entry(z).or_default() += g;
        }
        let mut rows = vec![Vec::new(); n * n];
        for ((x, y), zs) in map {
            rows[x * n + y] = zs.into_iter().filter(|(_, g)| *g != 0).collect();
        }
        Self { n, rows }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Nonzero `(z, gamma_{x,y,z})`: the product `t_x t_y`.
    pub fn row(&self, x: ElementId, y: ElementId) -> &[(ElementId, i64)] {
        &self.rows[x * self.n + y]
    }

    pub fn get(&self, x: ElementId, y: ElementId, z: ElementId) -> i64 {
        let row = self.row(x, y);
        row.binary_search_by_key(&z, |(w, _)| *w).map_or(0, |i| row[i].1)
    }

    /// Overwrites one entry; used for fault injection in the property suite.
    pub fn set(&mut self, x: ElementId, y: ElementId, z: ElementId, value: i64) {
        let row = &mut self.rows[x * self.n + y];
        match row.binary_search_by_key(&z, |(w, _)| *w) {
            Ok(i) if value == 0 => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = value,
            Err(_) if value == 0 => {}
            Err(i) => row.insert(i, (z, value)),
        }
    }

    /// Every nonzero triple `(x, y, z, gamma)`, sorted.
    pub fn triples(&self) -> impl Iterator<Item = (ElementId, ElementId, ElementId, i64)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(i, row)| {
            let (x, y) = (i / self.n, i % self.n);
            row.iter().map(move |&(z, g)| (x, y, z, g))
        })
    }
}

/// `D_c` for a two-sided cell: elements whose `p_{1,d}` has a nonzero
/// `v^{-a}` coefficient.
pub fn distinguished_involutions(cells: &CellDecomposition, cell: usize) -> &[ElementId] {
    &cells.two_sided[cell].distinguished
}

pub fn boc_zero(cells: &CellDecomposition, cell: usize) -> &[ElementId] {
    &cells.two_sided[cell].c_zero
}

/// `a(z)` for a single element.
pub fn a_value(cells: &CellDecomposition, z: ElementId) -> u32 {
    cells.a(z)
}

pub fn gamma(table: &GammaTable, x: ElementId, y: ElementId, z: ElementId) -> i64 {
    table.get(x, y, z)
}

/// Convenience for tests and reports: the words of a cell's elements.
pub fn cell_words(sys: &CoxeterSystem, elements: &[ElementId]) -> Vec<String> {
    elements.iter().map(|&w| sys.format_word(w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::KlTable;
    use std::sync::Arc;

    fn build(t: &str) -> (Arc<CoxeterSystem>, Hecke, CellDecomposition, GammaTable) {
        let sys = Arc::new(CoxeterSystem::from_type(t).unwrap());
        let kl = Arc::new(KlTable::build(&sys));
        let hecke = Hecke::new(sys.clone(), kl);
        let cells = compute_cells(&hecke);
        let gamma = GammaTable::build(&hecke, &cells);
        (sys, hecke, cells, gamma)
    }

    fn ids(sys: &CoxeterSystem, words: &[&str]) -> Vec<ElementId> {
        let mut v: Vec<ElementId> = words.iter().map(|w| sys.parse_word(w).unwrap()).collect();
        v.sort_unstable();
        v
    }

    /// Preorder closure straight from the raw structure constants: z is
    /// below x when c_z occurs in c_a c_x c_b for some a, b.
    fn raw_two_sided_oracle(sys: &CoxeterSystem, hecke: &Hecke) -> Vec<BTreeSet<ElementId>> {
        let n = sys.order();
        let mut reach = vec![vec![false; n]; n];
        for x in 0..n {
            for a in 0..n {
                let left = hecke.product(a, x);
                for (&y, _) in left.terms() {
                    for b in 0..n {
                        for (&z, _) in hecke.product(y, b).terms() {
                            reach[x][z] = true;
                        }
                    }
                }
            }
        }
        let mut classes: Vec<BTreeSet<ElementId>> = Vec::new();
        for x in 0..n {
            let class: BTreeSet<ElementId> = (0..n).filter(|&z| reach[x][z] && reach[z][x]).collect();
            if !classes.contains(&class) {
                classes.push(class);
            }
        }
        classes
    }

    #[test]
    fn a1_cells() {
        let (_, _, cells, _) = build("A1");
        assert_eq!(cells.two_sided.len(), 2);
        assert_eq!(cells.two_sided[0].elements, vec![0]);
        assert_eq!(cells.two_sided[1].elements, vec![1]);
    }

    #[test]
    fn a2_cells() {
        let (sys, hecke, cells, _) = build("A2");
        let sizes: Vec<usize> = cells.two_sided.iter().map(|c| c.elements.len()).collect();
        assert_eq!(sizes, vec![1, 4, 1]);
        let middle = &cells.two_sided[1];
        assert_eq!(middle.elements, ids(&sys, &["s1", "s2", "s1s2", "s2s1"]));
        let lefts: Vec<Vec<ElementId>> = middle.left_cells.iter().map(|&i| cells.left.cells[i].clone()).collect();
        assert_eq!(lefts, vec![ids(&sys, &["s1", "s2s1"]), ids(&sys, &["s2", "s1s2"])]);
        let oracle = raw_two_sided_oracle(&sys, &hecke);
        let mut ours: Vec<BTreeSet<ElementId>> =
            cells.two_sided.iter().map(|c| c.elements.iter().copied().collect()).collect();
        let mut theirs = oracle;
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs);
        // preorder: {w_max} <= middle <= {e}
        assert!(cells.leq[2][1] && cells.leq[1][0] && cells.leq[2][0]);
        assert!(!cells.leq[0][1]);
    }

    #[test]
    fn product_groups_factor() {
        let (_, _, cells, _) = build("A1xA1");
        assert_eq!(cells.two_sided.len(), 4);
        assert!(cells.two_sided.iter().all(|c| c.elements.len() == 1));
        let (sys, _, cells, _) = build("A2xA1");
        // cells of a product are products of cells: 3 * 2 = 6
        assert_eq!(cells.two_sided.len(), 6);
        for c in &cells.two_sided {
            let a_parts: BTreeSet<Vec<usize>> = c.elements.iter().map(|&w| sys.project(w)[0].clone()).collect();
            let b_parts: BTreeSet<Vec<usize>> = c.elements.iter().map(|&w| sys.project(w)[1].clone()).collect();
            assert_eq!(a_parts.len() * b_parts.len(), c.elements.len());
        }
    }

    #[test]
    fn a_values() {
        let (sys, _, cells, _) = build("A2");
        assert_eq!(cells.a(0), 0);
        assert_eq!(cells.a(sys.w_max()), 3);
        let a: Vec<u32> = cells.two_sided.iter().map(|c| c.a).collect();
        assert_eq!(a, vec![0, 1, 3]);
        for t in ["A3", "B3", "I2(5)"] {
            let (sys, _, cells, _) = build(t);
            assert_eq!(cells.a(sys.w_max()), sys.nu());
            assert_eq!(cells.a_function.max_degree, cells.a_function.neg_min_valuation);
            assert_eq!(cells.a_function.max_degree, cells.a_function.within_cell);
        }
    }

    #[test]
    fn gamma_examples() {
        let (_, _, _, g) = build("A1");
        assert_eq!(g.get(0, 0, 0), 1);
        assert_eq!(g.get(1, 1, 1), 1);
        let (sys, _, cells, g) = build("A2");
        let [s1, s2, s1s2, s2s1] = ["s1", "s2", "s1s2", "s2s1"].map(|w| sys.parse_word(w).unwrap());
        assert_eq!(g.get(s1s2, s2s1, s1), 1);
        assert!(g.row(s1s2, s1s2).is_empty());
        // The middle cell is the 2x2 matrix ring: s1 = E11, s2 = E22,
        // s1s2 = E12, s2s1 = E21.
        let unit = |i: usize, j: usize| [[s1, s1s2], [s2s1, s2]][i][j];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expected: Vec<(ElementId, i64)> = if j == k { vec![(unit(i, l), 1)] } else { vec![] };
                        assert_eq!(g.row(unit(i, j), unit(k, l)), expected.as_slice());
                    }
                }
            }
        }
        let _ = (cells, s2);
    }

    #[test]
    fn distinguished_and_c_zero() {
        let (sys, _, cells, _) = build("A2");
        assert_eq!(cells.two_sided[0].distinguished, vec![0]);
        assert_eq!(cells.two_sided[2].distinguished, vec![sys.w_max()]);
        assert_eq!(cells.two_sided[1].distinguished, ids(&sys, &["s1", "s2"]));
        assert_eq!(cells.two_sided[1].c_zero, ids(&sys, &["s1", "s2"]));
        assert_eq!(cells.two_sided[0].c_zero, vec![0]);

        let (sys, _, cells, _) = build("I2(5)");
        let middle = &cells.two_sided[1];
        assert_eq!(middle.elements.len(), 8);
        for d in &middle.distinguished {
            assert!(middle.c_zero.contains(d));
            assert!(sys.is_involution(*d));
        }
        assert_eq!(cells.p1_top_coefficient[sys.w_max()], 1);
    }
}
