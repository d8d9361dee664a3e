//! Finite Coxeter systems.
//!
//! A [`CoxeterSystem`] enumerates every element of a finite Coxeter group
//! once, breadth-first by length, and gives each a dense id. Ids are sorted
//! by `(length, ShortLex word)`, so they only depend on the type string.
//! Everything downstream (KL polynomials, cells, J) works on those ids.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Index of a group element in the ShortLex-sorted element table.
pub type ElementId = usize;

/// Index of a simple reflection, in type-string order.
pub type Generator = usize;

pub const DEFAULT_ELEMENT_BOUND: usize = 20_000;

/// An irreducible finite Coxeter type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    F4,
    H3,
    H4,
    /// Dihedral group of order `2m`. `G2` parses to `I2(6)`.
    I2(usize),
}

impl CoxeterType {
    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) => n,
            CoxeterType::F4 | CoxeterType::H4 => 4,
            CoxeterType::H3 => 3,
            CoxeterType::I2(_) => 2,
        }
    }

    /// `m_{ij}` for generators `i, j` of this component.
    pub fn coxeter_entry(self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        match self {
            CoxeterType::A(_) if j == i + 1 => 3,
            CoxeterType::B(n) if j == i + 1 => {
                if j + 1 == n {
                    4
                } else {
                    3
                }
            }
            // D_n: chain 0 - 1 - ... - (n-2), with n-1 attached to n-3.
            CoxeterType::D(n) if j == i + 1 && j + 1 < n => 3,
            CoxeterType::D(n) if j + 1 == n && i + 3 == n => 3,
            CoxeterType::F4 if (i, j) == (1, 2) => 4,
            CoxeterType::F4 if j == i + 1 => 3,
            CoxeterType::H3 | CoxeterType::H4 if (i, j) == (0, 1) => 5,
            CoxeterType::H3 | CoxeterType::H4 if j == i + 1 => 3,
            CoxeterType::I2(m) => m,
            _ => 2,
        }
    }

    /// Group order by the product formula, `None` on overflow.
    pub fn order(self) -> Option<u128> {
        fn factorial(n: usize) -> Option<u128> {
            (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
        }
        match self {
            CoxeterType::A(n) => factorial(n + 1),
            CoxeterType::B(n) => factorial(n)?.checked_mul(1u128.checked_shl(n as u32)?),
            CoxeterType::D(n) => factorial(n)?.checked_mul(1u128.checked_shl(n as u32 - 1)?),
            CoxeterType::F4 => Some(1152),
            CoxeterType::H3 => Some(120),
            CoxeterType::H4 => Some(14400),
            CoxeterType::I2(m) => Some(2 * m as u128),
        }
    }

    /// Whether the type is a Weyl group type.
    pub fn is_crystallographic(self) -> bool {
        match self {
            CoxeterType::H3 | CoxeterType::H4 => false,
            CoxeterType::I2(m) => matches!(m, 2 | 3 | 4 | 6),
            _ => true,
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::F4 => write!(f, "F4"),
            CoxeterType::H3 => write!(f, "H3"),
            CoxeterType::H4 => write!(f, "H4"),
            CoxeterType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// Parses `TYPE := FACTOR ("x" FACTOR)*`.
pub fn parse_type_string(spec: &str) -> Result<Vec<CoxeterType>> {
    let malformed = |reason: &str| Error::MalformedType {
        input: spec.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = spec.trim();
    if trimmed.is_empty() {
        return Err(malformed("empty"));
    }
    let mut out = Vec::new();
    for factor in trimmed.split('x') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(malformed("empty factor"));
        }
        let head_len = factor.chars().next().map_or(0, char::len_utf8);
        let (head, rest) = factor.split_at(head_len);
        let number = |s: &str| -> Result<usize> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed(&format!("expected a number in {factor:?}")));
            }
            s.parse().map_err(|_| malformed("number out of range"))
        };
        let ty = match head {
            "A" => {
                let n = number(rest)?;
                if n == 0 {
                    return Err(malformed("rank must be positive"));
                }
                CoxeterType::A(n)
            }
            "B" | "C" => {
                let n = number(rest)?;
                if n < 2 {
                    return Err(malformed("B needs rank at least 2"));
                }
                CoxeterType::B(n)
            }
            "D" => {
                let n = number(rest)?;
                if n < 3 {
                    return Err(malformed("D needs rank at least 3"));
                }
                CoxeterType::D(n)
            }
            "F" => match number(rest)? {
                4 => CoxeterType::F4,
                n if n > 4 => return Err(Error::NonFinite(factor.to_string())),
                _ => return Err(malformed("F is only defined in rank 4")),
            },
            "G" => match number(rest)? {
                2 => CoxeterType::I2(6),
                n if n > 2 => return Err(Error::NonFinite(factor.to_string())),
                _ => return Err(malformed("G is only defined in rank 2")),
            },
            "H" => match number(rest)? {
                3 => CoxeterType::H3,
                4 => CoxeterType::H4,
                n if n > 4 => return Err(Error::NonFinite(factor.to_string())),
                _ => return Err(malformed("H is only defined in ranks 3 and 4")),
            },
            "I" => {
                let inner = rest
                    .strip_prefix("2(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| malformed("expected I2(m)"))?;
                if matches!(inner, "inf" | "infinity" | "∞") {
                    return Err(Error::NonFinite(factor.to_string()));
                }
                let m = number(inner)?;
                if m < 2 {
                    return Err(malformed("I2(m) needs m >= 2"));
                }
                CoxeterType::I2(m)
            }
            _ => return Err(malformed(&format!("unknown family in {factor:?}"))),
        };
        out.push(ty);
    }
    Ok(out)
}

/// An element of a `Z[phi]` with `phi^2 = phi + 1`, used for exact
/// coordinates of the H-type realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct ZPhi(i64, i64);

impl ZPhi {
    const ZERO: ZPhi = ZPhi(0, 0);

    fn int(a: i64) -> Self {
        ZPhi(a, 0)
    }

    fn mul(self, o: ZPhi) -> ZPhi {
        ZPhi(self.0 * o.0 + self.1 * o.1, self.0 * o.1 + self.1 * o.0 + self.1 * o.1)
    }

    fn sub(self, o: ZPhi) -> ZPhi {
        ZPhi(self.0 - o.0, self.1 - o.1)
    }
}

/// A faithful action used only to tell elements apart during enumeration.
enum Realization {
    /// Contragredient action on weight coordinates, starting at `rho`.
    Weights { cartan: Vec<Vec<ZPhi>> },
    /// The dihedral group as affine maps `x -> e*x + k` of `Z/m`.
    Dihedral { m: i64 },
}

impl Realization {
    fn for_type(ty: CoxeterType) -> Self {
        if let CoxeterType::I2(m) = ty {
            return Realization::Dihedral { m: m as i64 };
        }
        let n = ty.rank();
        let mut cartan = vec![vec![ZPhi::ZERO; n]; n];
        for i in 0..n {
            cartan[i][i] = ZPhi::int(2);
            for j in i + 1..n {
                let (a, b) = match ty.coxeter_entry(i, j) {
                    2 => (ZPhi::ZERO, ZPhi::ZERO),
                    3 => (ZPhi::int(-1), ZPhi::int(-1)),
                    4 => (ZPhi::int(-1), ZPhi::int(-2)),
                    5 => (ZPhi(0, -1), ZPhi(0, -1)),
                    6 => (ZPhi::int(-1), ZPhi::int(-3)),
                    m => unreachable!("no weight realization for m = {m}"),
                };
                cartan[i][j] = a;
                cartan[j][i] = b;
            }
        }
        Realization::Weights { cartan }
    }

    fn state_len(&self) -> usize {
        match self {
            Realization::Weights { cartan } => 2 * cartan.len(),
            Realization::Dihedral { .. } => 2,
        }
    }

    fn initial(&self, out: &mut Vec<i64>) {
        match self {
            Realization::Weights { cartan } => {
                for _ in 0..cartan.len() {
                    out.extend([1, 0]);
                }
            }
            Realization::Dihedral { .. } => out.extend([1, 0]),
        }
    }

    /// Left action of the local generator `s` on `state`.
    fn act(&self, s: usize, state: &mut [i64]) {
        match self {
            Realization::Weights { cartan } => {
                let xs = ZPhi(state[2 * s], state[2 * s + 1]);
                for (j, a) in cartan[s].iter().enumerate() {
                    let x = ZPhi(state[2 * j], state[2 * j + 1]).sub(xs.mul(*a));
                    state[2 * j] = x.0;
                    state[2 * j + 1] = x.1;
                }
            }
            Realization::Dihedral { m } => {
                // s = (x -> -x), t = (x -> 1 - x); compose g on the left.
                let (e, k) = (state[0], state[1]);
                let shift = if s == 0 { 0 } else { 1 };
                state[0] = -e;
                state[1] = (shift - k).rem_euclid(*m);
            }
        }
    }
}

/// A group element together with its ShortLex reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub id: ElementId,
    pub word: Vec<Generator>,
}

/// A fully enumerated finite Coxeter system.
#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    type_string: String,
    components: Vec<(CoxeterType, Range<Generator>)>,
    rank: usize,
    coxeter_matrix: Vec<Vec<usize>>,
    words: Vec<Vec<Generator>>,
    length: Vec<u32>,
    // Flattened `[s * order + w]`.
    left_mult: Vec<u32>,
    right_mult: Vec<u32>,
    inverse: Vec<u32>,
    nu: u32,
    w_max: ElementId,
    bruhat: Vec<Vec<u64>>,
}

impl CoxeterSystem {
    /// Parses and enumerates a type string with the default element bound.
    pub fn from_type(spec: &str) -> Result<Self> {
        Self::from_type_bounded(spec, DEFAULT_ELEMENT_BOUND)
    }

    pub fn from_type_bounded(spec: &str, bound: usize) -> Result<Self> {
        let types = parse_type_string(spec)?;
        let type_string = types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("x");
        let order = types
            .iter()
            .try_fold(1u128, |acc, t| t.order().and_then(|o| acc.checked_mul(o)));
        match order {
            Some(o) if o <= bound as u128 => {}
            other => {
                return Err(Error::TooLarge {
                    type_string,
                    order: other.map_or_else(|| "overflowing".to_string(), |o| o.to_string()),
                    bound,
                })
            }
        }
        Ok(Self::enumerate(type_string, &types))
    }

    fn enumerate(type_string: String, types: &[CoxeterType]) -> Self {
        let mut components = Vec::new();
        let mut realizations = Vec::new();
        let mut state_ranges = Vec::new();
        let (mut gen, mut state_pos) = (0, 0);
        for &ty in types {
            let r = Realization::for_type(ty);
            components.push((ty, gen..gen + ty.rank()));
            state_ranges.push(state_pos..state_pos + r.state_len());
            gen += ty.rank();
            state_pos += r.state_len();
            realizations.push(r);
        }
        let rank = gen;
        let mut coxeter_matrix = vec![vec![2; rank]; rank];
        for (ty, range) in &components {
            for i in range.clone() {
                for j in range.clone() {
                    coxeter_matrix[i][j] = ty.coxeter_entry(i - range.start, j - range.start);
                }
            }
        }
        let owner: Vec<usize> = components
            .iter()
            .enumerate()
            .flat_map(|(c, (_, r))| r.clone().map(move |_| c))
            .collect();

        let mut start = Vec::with_capacity(state_pos);
        for r in &realizations {
            r.initial(&mut start);
        }

        // Breadth-first enumeration by left multiplication.
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        let mut bfs_len = vec![0u32];
        index.insert(start, 0);
        let mut raw_left: Vec<Vec<usize>> = vec![vec![usize::MAX; rank]];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for s in 0..rank {
                if raw_left[w][s] != usize::MAX {
                    continue;
                }
                let c = owner[s];
                let mut next = states[w].clone();
                realizations[c].act(s - components[c].1.start, &mut next[state_ranges[c].clone()]);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        index.insert(next.clone(), id);
                        states.push(next);
                        bfs_len.push(bfs_len[w] + 1);
                        raw_left.push(vec![usize::MAX; rank]);
                        queue.push_back(id);
                        id
                    }
                };
                raw_left[w][s] = id;
                raw_left[id][s] = w;
            }
        }
        drop(index);
        let n = states.len();

        // ShortLex word: smallest left descent, then the word of s*w.
        let mut raw_words: Vec<Vec<Generator>> = vec![Vec::new(); n];
        for w in 1..n {
            let s = (0..rank)
                .find(|&s| bfs_len[raw_left[w][s]] < bfs_len[w])
                .expect("non-identity element has a left descent");
            let mut word = vec![s];
            word.extend_from_slice(&raw_words[raw_left[w][s]]);
            raw_words[w] = word;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| bfs_len[a].cmp(&bfs_len[b]).then_with(|| raw_words[a].cmp(&raw_words[b])));
        let mut new_id = vec![0usize; n];
        for (id, &old) in order.iter().enumerate() {
            new_id[old] = id;
        }

        let words: Vec<Vec<Generator>> = order.iter().map(|&old| raw_words[old].clone()).collect();
        let length: Vec<u32> = order.iter().map(|&old| bfs_len[old]).collect();
        let mut left_mult = vec![0u32; rank * n];
        for (id, &old) in order.iter().enumerate() {
            for s in 0..rank {
                left_mult[s * n + id] = new_id[raw_left[old][s]] as u32;
            }
        }
        let mut inverse = vec![0u32; n];
        for (w, word) in words.iter().enumerate() {
            let mut x = 0usize;
            for &s in word {
                x = left_mult[s * n + x] as usize;
            }
            inverse[w] = x as u32;
        }
        let mut right_mult = vec![0u32; rank * n];
        for w in 0..n {
            for s in 0..rank {
                let t = left_mult[s * n + inverse[w] as usize] as usize;
                right_mult[s * n + w] = inverse[t];
            }
        }
        let nu = *length.last().unwrap_or(&0);
        let w_max = n - 1;

        // Bruhat ideals by the subword property on the ShortLex word:
        // below(w) = below(ws) u below(ws)*s for the last letter s.
        let blocks = n.div_ceil(64);
        let mut bruhat: Vec<Vec<u64>> = Vec::with_capacity(n);
        for w in 0..n {
            let mut bits = vec![0u64; blocks];
            if w == 0 {
                bits[0] = 1;
            } else {
                let s = *words[w].last().unwrap();
                let u = right_mult[s * n + w] as usize;
                bits.copy_from_slice(&bruhat[u]);
                for x in iter_bits(&bruhat[u]) {
                    let xs = right_mult[s * n + x] as usize;
                    bits[xs / 64] |= 1 << (xs % 64);
                }
            }
            bruhat.push(bits);
        }

        CoxeterSystem {
            type_string,
            components,
            rank,
            coxeter_matrix,
            words,
            length,
            left_mult,
            right_mult,
            inverse,
            nu,
            w_max,
            bruhat,
        }
    }

    pub fn type_string(&self) -> &str {
        &self.type_string
    }

    pub fn components(&self) -> &[(CoxeterType, Range<Generator>)] {
        &self.components
    }

    pub fn is_crystallographic(&self) -> bool {
        self.components.iter().all(|(t, _)| t.is_crystallographic())
    }

    /// True for a single `A_n` component.
    pub fn is_type_a(&self) -> bool {
        matches!(self.components.as_slice(), [(CoxeterType::A(_), _)])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn coxeter_matrix(&self) -> &[Vec<usize>] {
        &self.coxeter_matrix
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn w_max(&self) -> ElementId {
        self.w_max
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    pub fn length(&self, w: ElementId) -> u32 {
        self.length[w]
    }

    pub fn word(&self, w: ElementId) -> &[Generator] {
        &self.words[w]
    }

    pub fn element(&self, w: ElementId) -> GroupElement {
        GroupElement { id: w, word: self.words[w].clone() }
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        0..self.order()
    }

    /// Generator order, as `s1 .. sN` labels.
    pub fn generator_order(&self) -> Vec<String> {
        (1..=self.rank).map(|i| format!("s{i}")).collect()
    }

    pub fn generator(&self, s: Generator) -> ElementId {
        self.left_mult(s, 0)
    }

    pub fn left_mult(&self, s: Generator, w: ElementId) -> ElementId {
        self.left_mult[s * self.order() + w] as usize
    }

    pub fn right_mult(&self, w: ElementId, s: Generator) -> ElementId {
        self.right_mult[s * self.order() + w] as usize
    }

    pub fn inverse(&self, w: ElementId) -> ElementId {
        self.inverse[w] as usize
    }

    /// Group product, by folding the word of `u` into `w` on the right.
    pub fn mul(&self, w: ElementId, u: ElementId) -> ElementId {
        self.words[u].iter().fold(w, |acc, &s| self.right_mult(acc, s))
    }

    /// Element spelled by an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[Generator]) -> ElementId {
        word.iter().fold(0, |acc, &s| self.right_mult(acc, s))
    }

    pub fn is_left_descent(&self, s: Generator, w: ElementId) -> bool {
        self.length(self.left_mult(s, w)) < self.length(w)
    }

    pub fn is_right_descent(&self, w: ElementId, s: Generator) -> bool {
        self.length(self.right_mult(w, s)) < self.length(w)
    }

    /// `(left descents, right descents)`.
    pub fn descents(&self, w: ElementId) -> (Vec<Generator>, Vec<Generator>) {
        let left = (0..self.rank).filter(|&s| self.is_left_descent(s, w)).collect();
        let right = (0..self.rank).filter(|&s| self.is_right_descent(w, s)).collect();
        (left, right)
    }

    /// Bruhat order `y <= w`.
    pub fn bruhat_leq(&self, y: ElementId, w: ElementId) -> bool {
        self.bruhat[w][y / 64] >> (y % 64) & 1 == 1
    }

    /// All `y <= w`, ascending by id.
    pub fn bruhat_below(&self, w: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        iter_bits(&self.bruhat[w])
    }

    pub fn is_involution(&self, w: ElementId) -> bool {
        self.inverse(w) == w
    }

    /// The letters of `w`'s word falling in each irreducible component,
    /// renumbered locally.
    pub fn project(&self, w: ElementId) -> Vec<Vec<Generator>> {
        self.components
            .iter()
            .map(|(_, r)| {
                self.words[w]
                    .iter()
                    .filter(|s| r.contains(s))
                    .map(|s| s - r.start)
                    .collect()
            })
            .collect()
    }

    /// `s1s2s1`, or `e` for the identity.
    pub fn format_word(&self, w: ElementId) -> String {
        if w == 0 {
            return "e".to_string();
        }
        self.words[w].iter().map(|s| format!("s{}", s + 1)).collect()
    }

    /// Inverse of [`format_word`](Self::format_word). Also accepts
    /// separators and bare indices (`"1 2 1"`, `"s1,s2"`); the word need
    /// not be reduced.
    pub fn parse_word(&self, text: &str) -> Result<ElementId> {
        let bad = |reason: String| Error::MalformedWord { input: text.to_string(), reason };
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "1" && self.rank == 0 {
            return Ok(0);
        }
        let mut letters = Vec::new();
        let has_s = t.contains('s');
        let tokens: Vec<&str> = if has_s {
            t.split('s').map(|x| x.trim_matches(|c: char| c == ',' || c.is_whitespace())).collect()
        } else {
            t.split(|c: char| c == ',' || c.is_whitespace()).collect()
        };
        for (i, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                if has_s && i == 0 {
                    continue;
                }
                if !has_s {
                    continue;
                }
                return Err(bad("empty generator".into()));
            }
            let k: usize = tok.parse().map_err(|_| bad(format!("bad generator {tok:?}")))?;
            if k == 0 || k > self.rank {
                return Err(bad(format!("generator {k} outside 1..={}", self.rank)));
            }
            letters.push(k - 1);
        }
        Ok(self.from_word(&letters))
    }
}

pub(crate) fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(block, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let tz = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(block * 64 + tz)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Exhaustive word enumeration: reduce words with the relations only,
    /// identifying elements through an independent permutation action.
    /// Here, the group acts on itself; elements are sets of words closed
    /// under braid moves and `ss` cancellation, searched breadth-first.
    fn order_by_word_search(m: &[Vec<usize>], max_len: usize) -> usize {
        // Words are canonicalized by computing the whole class under
        // braid moves and deletions; two words are equal iff classes meet.
        fn braid_class(word: &[usize], m: &[Vec<usize>]) -> HashSet<Vec<usize>> {
            let mut seen = HashSet::new();
            let mut stack = vec![word.to_vec()];
            while let Some(w) = stack.pop() {
                if !seen.insert(w.clone()) {
                    continue;
                }
                for i in 0..w.len() {
                    for j in 0..m.len() {
                        if j == w[i] {
                            continue;
                        }
                        let k = m[w[i]][j];
                        if i + k > w.len() {
                            continue;
                        }
                        let (a, b) = (w[i], j);
                        let alt = |x: usize, y: usize| (0..k).map(move |t| if t % 2 == 0 { x } else { y });
                        if w[i..i + k].iter().copied().eq(alt(a, b)) {
                            let mut n = w.clone();
                            for (t, c) in alt(b, a).enumerate() {
                                n[i + t] = c;
                            }
                            stack.push(n);
                        }
                    }
                }
            }
            seen
        }
        // Matsumoto/Tits: a word is reduced iff no word in its braid class
        // has two equal adjacent letters.
        let rank = m.len();
        let mut reduced: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        let mut classes: Vec<HashSet<Vec<usize>>> = vec![HashSet::from([vec![]])];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 0..rank {
                    let mut cand = w.clone();
                    cand.push(s);
                    if classes.iter().any(|c| c.contains(&cand)) {
                        continue;
                    }
                    let class = braid_class(&cand, m);
                    if class.iter().any(|x| x.windows(2).any(|p| p[0] == p[1])) {
                        continue;
                    }
                    classes.push(class);
                    reduced.push(cand.clone());
                    next.push(cand);
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        reduced.len()
    }

    fn check_tables(sys: &CoxeterSystem) {
        let n = sys.order();
        let mut top = 0;
        for w in 0..n {
            assert_eq!(sys.word(w).len() as u32, sys.length(w));
            assert_eq!(sys.from_word(sys.word(w)), w);
            let inv = sys.inverse(w);
            assert_eq!(sys.inverse(inv), w);
            assert_eq!(sys.length(inv), sys.length(w));
            if sys.length(w) == sys.nu() {
                top += 1;
            }
            for s in 0..sys.rank() {
                let ws = sys.right_mult(w, s);
                let sw = sys.left_mult(s, w);
                assert_eq!(sys.length(ws).abs_diff(sys.length(w)), 1);
                assert_eq!(sys.length(sw).abs_diff(sys.length(w)), 1);
                let mut word = sys.word(w).to_vec();
                word.push(s);
                assert_eq!(sys.from_word(&word), ws);
                assert_eq!(sys.left_mult(s, sys.left_mult(s, w)), w);
            }
            assert_eq!(sys.length(sys.mul(w, sys.w_max())), sys.nu() - sys.length(w));
        }
        assert_eq!(top, 1);
        assert_eq!(sys.length(sys.w_max()), sys.nu());
    }

    #[test]
    fn small_orders() {
        let a1 = CoxeterSystem::from_type("A1").unwrap();
        assert_eq!((a1.order(), a1.nu()), (2, 1));
        let a2 = CoxeterSystem::from_type("A2").unwrap();
        assert_eq!((a2.order(), a2.nu()), (6, 3));
        let i27 = CoxeterSystem::from_type("I2(7)").unwrap();
        assert_eq!((i27.order(), i27.nu()), (14, 7));
    }

    #[test]
    fn h3_matches_word_enumeration() {
        let h3 = CoxeterSystem::from_type("H3").unwrap();
        assert_eq!((h3.order(), h3.nu()), (120, 15));
        assert_eq!(order_by_word_search(h3.coxeter_matrix(), 20), 120);
        check_tables(&h3);
    }

    #[test]
    fn tables_are_consistent() {
        for t in ["A1", "A3", "B3", "D4", "I2(5)", "I2(8)", "G2", "A1xA1", "A2xI2(5)", "F4"] {
            let sys = CoxeterSystem::from_type(t).unwrap();
            let expected: u128 = parse_type_string(t).unwrap().iter().map(|c| c.order().unwrap()).product();
            assert_eq!(sys.order() as u128, expected, "{t}");
            check_tables(&sys);
        }
    }

    #[test]
    fn shortlex_words_are_least() {
        let sys = CoxeterSystem::from_type("A3").unwrap();
        assert_eq!(order_by_word_search(sys.coxeter_matrix(), 10), 24);
        // Among all words of the right length spelling w, the stored word is least.
        fn words(rank: usize, len: usize) -> Vec<Vec<usize>> {
            (0..len).fold(vec![vec![]], |acc, _| {
                acc.iter()
                    .flat_map(|w| (0..rank).map(move |s| [w.as_slice(), &[s]].concat()))
                    .collect()
            })
        }
        for w in sys.elements() {
            let best = words(sys.rank(), sys.length(w) as usize)
                .into_iter()
                .filter(|word| sys.from_word(word) == w)
                .min()
                .unwrap();
            assert_eq!(best, sys.word(w));
        }
    }

    /// Permutation model of `S_{n+1}`: `s_i` swaps positions `i, i+1`.
    fn perm_of(sys: &CoxeterSystem, w: ElementId) -> Vec<usize> {
        let n = sys.rank() + 1;
        let mut p: Vec<usize> = (0..n).collect();
        for &s in sys.word(w) {
            p.swap(s, s + 1);
        }
        p
    }

    #[test]
    fn multiplication_matches_permutations() {
        let sys = CoxeterSystem::from_type("A2").unwrap();
        let compose = |a: &[usize], b: &[usize]| b.iter().map(|&i| a[i]).collect::<Vec<_>>();
        for w in sys.elements() {
            assert_eq!(sys.mul(w, 0), w);
            for u in sys.elements() {
                assert_eq!(perm_of(&sys, sys.mul(w, u)), compose(&perm_of(&sys, w), &perm_of(&sys, u)));
            }
        }
        let a1 = CoxeterSystem::from_type("A1").unwrap();
        assert_eq!(a1.mul(1, 1), 0);
        let s1s2 = sys.parse_word("s1s2").unwrap();
        let s2s1 = sys.parse_word("s2s1").unwrap();
        assert_eq!(sys.mul(s1s2, s2s1), sys.parse_word("s1s2s2s1").unwrap());
        assert_eq!(sys.mul(s1s2, s2s1), 0);
    }

    #[test]
    fn descent_examples() {
        let sys = CoxeterSystem::from_type("A2").unwrap();
        assert_eq!(sys.descents(0), (vec![], vec![]));
        assert_eq!(sys.descents(sys.w_max()), (vec![0, 1], vec![0, 1]));
        let w = sys.parse_word("s1s2").unwrap();
        assert_eq!(sys.descents(w), (vec![0], vec![1]));
    }

    fn subword_oracle(sys: &CoxeterSystem, y: ElementId, w: ElementId) -> bool {
        let word = sys.word(w);
        (0u32..1 << word.len()).any(|mask| {
            let sub: Vec<usize> = word.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
            sys.from_word(&sub) == y
        })
    }

    #[test]
    fn bruhat_examples_and_subword_oracle() {
        let sys = CoxeterSystem::from_type("A2").unwrap();
        let s1 = sys.parse_word("s1").unwrap();
        assert!(sys.bruhat_leq(s1, sys.parse_word("s2s1").unwrap()));
        assert!(!sys.bruhat_leq(sys.parse_word("s1s2").unwrap(), sys.parse_word("s2s1").unwrap()));
        for t in ["A3", "B3", "I2(5)"] {
            let sys = CoxeterSystem::from_type(t).unwrap();
            for w in sys.elements() {
                assert!(sys.bruhat_leq(0, w));
                assert!(sys.bruhat_leq(w, w));
                for y in sys.elements() {
                    assert_eq!(sys.bruhat_leq(y, w), subword_oracle(&sys, y, w), "{t} {y} {w}");
                }
            }
        }
    }

    #[test]
    fn bruhat_is_a_partial_order_and_dihedral_is_by_length() {
        for m in 2..=8 {
            let sys = CoxeterSystem::from_type(&format!("I2({m})")).unwrap();
            for y in sys.elements() {
                for w in sys.elements() {
                    let expected = y == w || sys.length(y) < sys.length(w);
                    assert_eq!(sys.bruhat_leq(y, w), expected);
                }
            }
        }
        let sys = CoxeterSystem::from_type("B3").unwrap();
        for x in sys.elements() {
            for y in sys.elements() {
                if sys.bruhat_leq(x, y) && sys.bruhat_leq(y, x) {
                    assert_eq!(x, y);
                }
                if sys.bruhat_leq(x, y) {
                    assert!(sys.length(x) <= sys.length(y));
                    for z in sys.bruhat_below(x) {
                        assert!(sys.bruhat_leq(z, y));
                    }
                }
            }
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_type_string("Q3"), Err(Error::MalformedType { .. })));
        assert!(matches!(parse_type_string("A"), Err(Error::MalformedType { .. })));
        assert!(matches!(parse_type_string("A2x"), Err(Error::MalformedType { .. })));
        assert!(matches!(parse_type_string("I2(x)"), Err(Error::MalformedType { .. })));
        assert!(matches!(parse_type_string("H5"), Err(Error::NonFinite(_))));
        assert!(matches!(parse_type_string("I2(inf)"), Err(Error::NonFinite(_))));
        assert!(matches!(CoxeterSystem::from_type_bounded("A5", 100), Err(Error::TooLarge { .. })));
        assert!(matches!(CoxeterSystem::from_type("A40"), Err(Error::TooLarge { .. })));
        assert_eq!(parse_type_string("G2").unwrap(), vec![CoxeterType::I2(6)]);
        assert_eq!(
            parse_type_string("A2xI2(7)xH3").unwrap(),
            vec![CoxeterType::A(2), CoxeterType::I2(7), CoxeterType::H3]
        );
    }

    #[test]
    fn words_round_trip() {
        let sys = CoxeterSystem::from_type("B3").unwrap();
        for w in sys.elements() {
            assert_eq!(sys.parse_word(&sys.format_word(w)).unwrap(), w);
        }
        assert_eq!(sys.parse_word("1 2 1").unwrap(), sys.parse_word("s1s2s1").unwrap());
        assert!(sys.parse_word("s4").is_err());
        assert!(sys.parse_word("sx").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use std::sync::OnceLock;

        fn b3() -> &'static CoxeterSystem {
            static SYS: OnceLock<CoxeterSystem> = OnceLock::new();
            SYS.get_or_init(|| CoxeterSystem::from_type("B3").unwrap())
        }

        proptest! {
            #[test]
            fn words_multiply_consistently(a in proptest::collection::vec(0usize..3, 0..12), b in proptest::collection::vec(0usize..3, 0..12)) {
                let sys = b3();
                let (x, y) = (sys.from_word(&a), sys.from_word(&b));
                let joined: Vec<usize> = a.iter().chain(&b).copied().collect();
                prop_assert_eq!(sys.mul(x, y), sys.from_word(&joined));
                prop_assert_eq!(sys.mul(x, sys.inverse(x)), 0);
                prop_assert!(sys.length(x) as usize <= a.len());
                prop_assert_eq!(sys.length(x) % 2, (a.len() % 2) as u32);
                prop_assert_eq!(sys.from_word(sys.word(x)), x);
                prop_assert_eq!(sys.parse_word(&sys.format_word(x)).unwrap(), x);
            }

            #[test]
            fn exchange_condition(a in proptest::collection::vec(0usize..3, 0..12), s in 0usize..3) {
                let sys = b3();
                let w = sys.from_word(&a);
                let sw = sys.left_mult(s, w);
                prop_assert_eq!(sys.length(sw).abs_diff(sys.length(w)), 1);
                prop_assert_eq!(sys.is_left_descent(s, w), sys.length(sw) < sys.length(w));
                prop_assert!(sys.bruhat_leq(sw.min(w), sw.max(w)));
            }
        }
    }
}
