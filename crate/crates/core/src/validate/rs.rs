//! Cells of symmetric groups via Robinson–Schensted.
//!
//! An element acts on positions: `s_i` swaps positions `i` and `i+1`, so the
//! right descents of `w` are the descents of its one-line sequence. Left cells
//! are the fibres of the recording tableau, right cells of the insertion
//! tableau, two-sided cells of the common shape.

use std::collections::BTreeMap;

use crate::coxeter::{CoxeterSystem, CoxeterType, ElementId};
use crate::error::{Error, Result};

pub type Tableau = Vec<Vec<usize>>;

/// The partitions of `W` produced by the correspondence, each as sorted
/// classes ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCells {
    pub left: Vec<Vec<ElementId>>,
    pub right: Vec<Vec<ElementId>>,
    pub two_sided: Vec<Vec<ElementId>>,
}

/// One-line notation of `w` in `S_{n+1}`, values `1..=n+1`.
pub fn one_line(sys: &CoxeterSystem, w: ElementId) -> Vec<usize> {
    let n = sys.rank() + 1;
    let mut seq: Vec<usize> = (1..=n).collect();
    for &s in sys.word(w) {
        seq.swap(s, s + 1);
    }
    seq
}

/// Row insertion; returns `(P, Q)`.
pub fn robinson_schensted(seq: &[usize]) -> (Tableau, Tableau) {
    let mut p: Tableau = Vec::new();
    let mut q: Tableau = Vec::new();
    for (step, &value) in seq.iter().enumerate() {
        let mut bump = value;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![bump]);
                q.push(vec![step + 1]);
                break;
            }
            match p[row].iter().position(|&e| e > bump) {
                Some(i) => {
                    bump = std::mem::replace(&mut p[row][i], bump);
                    row += 1;
                }
                None => {
                    p[row].push(bump);
                    q[row].push(step + 1);
                    break;
                }
            }
        }
    }
    (p, q)
}

fn shape(t: &Tableau) -> Vec<usize> {
    t.iter().map(Vec::len).collect()
}

fn classes<K: Ord>(keys: impl Iterator<Item = (K, ElementId)>) -> Vec<Vec<ElementId>> {
    let mut map: BTreeMap<K, Vec<ElementId>> = BTreeMap::new();
    for (k, w) in keys {
        map.entry(k).or_default().push(w);
    }
    canonical(map.into_values().collect())
}

/// Sorts each class and the list of classes.
pub fn canonical(mut classes: Vec<Vec<ElementId>>) -> Vec<Vec<ElementId>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

pub fn type_a_cell_oracle(sys: &CoxeterSystem) -> Result<RsCells> {
    if !matches!(sys.components(), [(CoxeterType::A(_), _)]) {
        return Err(Error::MalformedType { input: sys.type_string().into(), reason: "the tableau oracle needs a single type-A factor".into() });
    }
    let tableaux: Vec<(Tableau, Tableau)> = sys.elements().map(|w| robinson_schensted(&one_line(sys, w))).collect();
    Ok(RsCells {
        left: classes(tableaux.iter().enumerate().map(|(w, (_, q))| (q.clone(), w))),
        right: classes(tableaux.iter().enumerate().map(|(w, (p, _))| (p.clone(), w))),
        two_sided: classes(tableaux.iter().enumerate().map(|(w, (p, _))| (shape(p), w))),
    })
}
