//! Transformations of a finite dimension, generator words, the hat
//! evaluation map, and canonical forms with derivation traces.
//!
//! A word over the generators `s[i,j]` (transpositions) and `s[i/j]`
//! (replacements) evaluates to the transformation obtained by composing
//! the letters left to right with the first letter outermost:
//! `hat(l1 l2 ... lk) = l1 ∘ l2 ∘ ... ∘ lk` where `(a ∘ b)(x) = a(b(x))`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::config::Config;

/// Which operations a signature carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigKind {
    /// Transpositions only.
    Ta,
    /// Transpositions and replacements.
    Sa,
    /// Transpositions, replacements, and diagonal constants.
    Sad,
}

impl SigKind {
    pub fn admits_replacements(self) -> bool {
        !matches!(self, SigKind::Ta)
    }

    pub fn admits_diagonals(self) -> bool {
        matches!(self, SigKind::Sad)
    }

    pub fn name(self) -> &'static str {
        match self {
            SigKind::Ta => "TA",
            SigKind::Sa => "SA",
            SigKind::Sad => "SAD",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermError {
    DimensionMismatch { left: usize, right: usize },
    IndexOutOfRange { index: usize, dim: usize },
    EqualIndices { index: usize },
    NonPermutationInTa,
    ReplacementInTa,
    BoundExceeded { dim: usize, cap: usize },
    TraceBudget { nodes: usize },
}

impl fmt::Display for PermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            PermError::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            PermError::EqualIndices { index } => {
                write!(f, "generator indices must differ, got {index} twice")
            }
            PermError::NonPermutationInTa => {
                write!(f, "TA signature admits permutations only")
            }
            PermError::ReplacementInTa => {
                write!(f, "TA signature admits transposition letters only")
            }
            PermError::BoundExceeded { dim, cap } => {
                write!(f, "dimension {dim} exceeds the configured bound {cap}")
            }
            PermError::TraceBudget { nodes } => {
                write!(f, "trace search exceeded the node budget ({nodes} nodes)")
            }
        }
    }
}

/// A total self-map of `{0..n-1}`; `images[k] = t(k)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformation {
    dim: usize,
    images: Vec<usize>,
}

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let dim = images.len();
        for &v in &images {
            if v >= dim {
                return Err(PermError::IndexOutOfRange { index: v, dim });
            }
        }
        Ok(Transformation { dim, images })
    }

    pub fn identity(dim: usize) -> Self {
        Transformation {
            dim,
            images: (0..dim).collect(),
        }
    }

    /// The transposition `[i,j]`.
    pub fn transposition(dim: usize, i: usize, j: usize) -> Result<Self, PermError> {
        check_pair(dim, i, j)?;
        let mut t = Transformation::identity(dim);
        t.images.swap(i, j);
        Ok(t)
    }

    /// The replacement `[i/j]`: sends `i` to `j`, fixes everything else.
    pub fn replacement(dim: usize, i: usize, j: usize) -> Result<Self, PermError> {
        check_pair(dim, i, j)?;
        let mut t = Transformation::identity(dim);
        t.images[i] = j;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.dim];
        for &v in &self.images {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// Inverse of a permutation.
    pub fn inverse(&self) -> Option<Transformation> {
        if !self.is_permutation() {
            return None;
        }
        let mut inv = vec![0; self.dim];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Some(Transformation {
            dim: self.dim,
            images: inv,
        })
    }

    /// Number of inversions of the image sequence; for permutations this
    /// is the Coxeter length over adjacent transpositions.
    pub fn inversions(&self) -> usize {
        let mut c = 0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                if self.images[i] > self.images[j] {
                    c += 1;
                }
            }
        }
        c
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        write!(f, ")")
    }
}

fn check_pair(dim: usize, i: usize, j: usize) -> Result<(), PermError> {
    if i >= dim {
        return Err(PermError::IndexOutOfRange { index: i, dim });
    }
    if j >= dim {
        return Err(PermError::IndexOutOfRange { index: j, dim });
    }
    if i == j {
        return Err(PermError::EqualIndices { index: i });
    }
    Ok(())
}

/// `compose(a, b)(k) = a(b(k))`.
pub fn compose(a: &Transformation, b: &Transformation) -> Result<Transformation, PermError> {
    if a.dim != b.dim {
        return Err(PermError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(Transformation {
        dim: a.dim,
        images: (0..a.dim).map(|k| a.apply(b.apply(k))).collect(),
    })
}

/// A generator letter of a substitution word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `s[i,j]`.
    Transpose(usize, usize),
    /// `s[i/j]`.
    Replace(usize, usize),
}

impl Letter {
    pub fn transformation(self, dim: usize) -> Result<Transformation, PermError> {
        match self {
            Letter::Transpose(i, j) => Transformation::transposition(dim, i, j),
            Letter::Replace(i, j) => Transformation::replacement(dim, i, j),
        }
    }

    pub fn is_replacement(self) -> bool {
        matches!(self, Letter::Replace(..))
    }

    fn indices(self) -> (usize, usize) {
        match self {
            Letter::Transpose(i, j) | Letter::Replace(i, j) => (i, j),
        }
    }

    /// Index pair as a set, for disjointness tests.
    fn index_set(self) -> (usize, usize) {
        let (i, j) = self.indices();
        (i.min(j), i.max(j))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Transpose(i, j) => write!(f, "s[{i},{j}]"),
            Letter::Replace(i, j) => write!(f, "s[{i}/{j}]"),
        }
    }
}

/// A finite word over the generator letters; the empty word denotes the
/// identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubstWord {
    dim: usize,
    letters: Vec<Letter>,
}

impl SubstWord {
    pub fn new(dim: usize, letters: Vec<Letter>) -> Result<Self, PermError> {
        for l in &letters {
            let (i, j) = l.indices();
            check_pair(dim, i, j)?;
        }
        Ok(SubstWord { dim, letters })
    }

    pub fn empty(dim: usize) -> Self {
        SubstWord {
            dim,
            letters: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_transposition_only(&self) -> bool {
        self.letters.iter().all(|l| !l.is_replacement())
    }

    pub fn concat(&self, other: &SubstWord) -> Result<SubstWord, PermError> {
        if self.dim != other.dim {
            return Err(PermError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(SubstWord {
            dim: self.dim,
            letters,
        })
    }
}

impl fmt::Display for SubstWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SubstWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Evaluates a word to its transformation; the empty word maps to the
/// identity and each letter composes on the left.
pub fn hat(w: &SubstWord) -> Transformation {
    let mut acc = Transformation::identity(w.dim);
    for l in &w.letters {
        let t = l.transformation(w.dim).expect("validated on construction");
        acc = compose(&acc, &t).expect("same dimension");
    }
    acc
}

/// Decides equality of two words under the equational axioms of the
/// signature. By the presentation of `S_n` (resp. of the monoid `^nn`)
/// this coincides with equality of hat values, which is what is computed.
pub fn words_equal_by_axioms(
    w1: &SubstWord,
    w2: &SubstWord,
    sig: SigKind,
) -> Result<bool, PermError> {
    if w1.dim != w2.dim {
        return Err(PermError::DimensionMismatch {
            left: w1.dim,
            right: w2.dim,
        });
    }
    if sig == SigKind::Ta && !(w1.is_transposition_only() && w2.is_transposition_only()) {
        return Err(PermError::ReplacementInTa);
    }
    Ok(hat(w1) == hat(w2))
}

/// Generator letters of the signature at dimension `dim`, in canonical
/// order: transpositions `(i,j)` with `i < j` first, then replacements
/// over all ordered pairs.
pub fn generators(dim: usize, sig: SigKind) -> Vec<Letter> {
    let mut gens = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            gens.push(Letter::Transpose(i, j));
        }
    }
    if sig.admits_replacements() {
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    gens.push(Letter::Replace(i, j));
                }
            }
        }
    }
    gens
}

fn enum_cap(sig: SigKind, config: &Config) -> usize {
    match sig {
        SigKind::Ta => config.perm_enum_cap,
        _ => config.map_enum_cap,
    }
}

/// All permutations (TA) or all transformations (SA) of the dimension, in
/// lexicographic order of their image sequences.
pub fn enumerate_monoid(
    dim: usize,
    sig: SigKind,
    config: &Config,
) -> Result<Vec<Transformation>, PermError> {
    let cap = enum_cap(sig, config);
    if dim > cap {
        return Err(PermError::BoundExceeded { dim, cap });
    }
    let mut out = Vec::new();
    let mut images = vec![0usize; dim];
    loop {
        let t = Transformation {
            dim,
            images: images.clone(),
        };
        if sig != SigKind::Ta || t.is_permutation() {
            out.push(t);
        }
        // odometer, last digit fastest, so output is lex ascending
        let mut k = dim;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            images[k] += 1;
            if images[k] < dim {
                break;
            }
            images[k] = 0;
        }
        if dim == 0 {
            return Ok(out);
        }
    }
}

/// Shortest word evaluating to `t`, lexicographically least among the
/// shortest, found by breadth-first search over the Cayley graph.
pub fn decompose(
    t: &Transformation,
    sig: SigKind,
    config: &Config,
) -> Result<SubstWord, PermError> {
    let dim = t.dim;
    let cap = enum_cap(sig, config);
    if dim > cap {
        return Err(PermError::BoundExceeded { dim, cap });
    }
    if sig == SigKind::Ta && !t.is_permutation() {
        return Err(PermError::NonPermutationInTa);
    }
    let gens = generators(dim, sig);
    let id = Transformation::identity(dim);
    if *t == id {
        return Ok(SubstWord::empty(dim));
    }
    let mut seen: BTreeMap<Transformation, ()> = BTreeMap::new();
    seen.insert(id.clone(), ());
    let mut queue: VecDeque<(Transformation, Vec<Letter>)> = VecDeque::new();
    queue.push_back((id, Vec::new()));
    while let Some((elem, word)) = queue.pop_front() {
        for &g in &gens {
            let gt = g.transformation(dim)?;
            let next = compose(&elem, &gt)?;
            if seen.contains_key(&next) {
                continue;
            }
            let mut next_word = word.clone();
            next_word.push(g);
            if next == *t {
                return Ok(SubstWord {
                    dim,
                    letters: next_word,
                });
            }
            seen.insert(next.clone(), ());
            queue.push_back((next, next_word));
        }
    }
    unreachable!("generators span the monoid")
}

/// The bubble-sort normal form of a permutation: the adjacent-transposition
/// word read off a deterministic bubble sort of the image sequence. It is
/// reduced (its length is the inversion count) and unique per permutation.
pub fn canonical_word(t: &Transformation) -> Result<SubstWord, PermError> {
    if !t.is_permutation() {
        return Err(PermError::NonPermutationInTa);
    }
    let dim = t.dim;
    let mut images = t.images.clone();
    let mut swaps = Vec::new();
    loop {
        let mut swapped = false;
        for i in 0..dim.saturating_sub(1) {
            if images[i] > images[i + 1] {
                images.swap(i, i + 1);
                swaps.push(Letter::Transpose(i, i + 1));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    swaps.reverse();
    Ok(SubstWord {
        dim,
        letters: swaps,
    })
}

/// Relation families cited by trace steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomId {
    /// Schema 4: `s[i,j] s[i,j] = e`.
    Involution,
    /// Schema 5: disjoint transpositions commute.
    Commute,
    /// Schema 6: relations of transpositions sharing a point — the braid
    /// form `aba = bab` and the conjugation form `s[i,k] = aba`.
    Braid,
}

impl AxiomId {
    pub fn number(self) -> u8 {
        match self {
            AxiomId::Involution => 4,
            AxiomId::Commute => 5,
            AxiomId::Braid => 6,
        }
    }
}

/// One rewrite step: the cited relation, the position of the rewritten
/// subword, and the whole word after the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub axiom: AxiomId,
    pub pos: usize,
    pub word: SubstWord,
}

/// A derivation witnessing `start = end`, one relation instance per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub start: SubstWord,
    pub end: SubstWord,
    pub steps: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceError {
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace step {}: {}", self.step, self.reason)
    }
}

fn is_transposition_pair_disjoint(a: Letter, b: Letter) -> bool {
    let (a1, a2) = a.index_set();
    let (b1, b2) = b.index_set();
    a1 != b1 && a1 != b2 && a2 != b1 && a2 != b2
}

fn segment_hat(dim: usize, seg: &[Letter]) -> Transformation {
    let w = SubstWord {
        dim,
        letters: seg.to_vec(),
    };
    hat(&w)
}

/// Checks one candidate rewrite `old_seg -> new_seg` against the cited
/// relation family.
fn valid_instance(dim: usize, axiom: AxiomId, old_seg: &[Letter], new_seg: &[Letter]) -> bool {
    let all_transpositions = old_seg
        .iter()
        .chain(new_seg.iter())
        .all(|l| !l.is_replacement());
    if !all_transpositions {
        return false;
    }
    match axiom {
        AxiomId::Involution => match (old_seg.len(), new_seg.len()) {
            (2, 0) => old_seg[0].index_set() == old_seg[1].index_set(),
            (0, 2) => new_seg[0].index_set() == new_seg[1].index_set(),
            _ => false,
        },
        AxiomId::Commute => {
            old_seg.len() == 2
                && new_seg.len() == 2
                && old_seg[0].index_set() == new_seg[1].index_set()
                && old_seg[1].index_set() == new_seg[0].index_set()
                && is_transposition_pair_disjoint(old_seg[0], old_seg[1])
        }
        AxiomId::Braid => {
            let shapes_ok = matches!((old_seg.len(), new_seg.len()), (3, 3) | (1, 3) | (3, 1));
            if !shapes_ok {
                return false;
            }
            for seg in [old_seg, new_seg] {
                if seg.len() == 3
                    && !(seg[0].index_set() == seg[2].index_set()
                        && !is_transposition_pair_disjoint(seg[0], seg[1]))
                {
                    return false;
                }
            }
            segment_hat(dim, old_seg) == segment_hat(dim, new_seg)
        }
    }
}

impl ProofTrace {
    /// Replays the trace: every step must rewrite a contiguous subword by
    /// one instance of its cited relation, the hat value must be invariant
    /// throughout, and the final word must equal `end`.
    pub fn replay(&self) -> Result<(), TraceError> {
        let dim = self.start.dim();
        let goal = hat(&self.start);
        let mut word = self.start.letters.clone();
        for (k, step) in self.steps.iter().enumerate() {
            let err = |reason: String| TraceError { step: k, reason };
            let after = &step.word.letters;
            let shapes: &[(usize, usize)] = match step.axiom {
                AxiomId::Involution => &[(2, 0), (0, 2)],
                AxiomId::Commute => &[(2, 2)],
                AxiomId::Braid => &[(3, 3), (1, 3), (3, 1)],
            };
            let mut ok = false;
            for &(k_old, k_new) in shapes {
                if step.pos + k_old > word.len() || step.pos + k_new > after.len() {
                    continue;
                }
                if word.len() - k_old != after.len() - k_new {
                    continue;
                }
                if word[..step.pos] != after[..step.pos] {
                    continue;
                }
                if word[step.pos + k_old..] != after[step.pos + k_new..] {
                    continue;
                }
                if valid_instance(
                    dim,
                    step.axiom,
                    &word[step.pos..step.pos + k_old],
                    &after[step.pos..step.pos + k_new],
                ) {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(err(format!(
                    "no valid axiom-{} rewrite at position {}",
                    step.axiom.number(),
                    step.pos
                )));
            }
            word = after.clone();
            let here = segment_hat(dim, &word);
            if here != goal {
                return Err(err(String::from("hat value not preserved")));
            }
        }
        if word != self.end.letters {
            return Err(TraceError {
                step: self.steps.len(),
                reason: String::from("final word differs from the stated end"),
            });
        }
        Ok(())
    }
}

/// Words over adjacent transpositions only, as generator indices
/// (`a` stands for `s[a,a+1]`).
fn adjacent_index(l: Letter) -> Option<usize> {
    match l {
        Letter::Transpose(i, j) if j == i + 1 => Some(i),
        Letter::Transpose(i, j) if i == j + 1 => Some(j),
        _ => None,
    }
}

type MoveStep = (AxiomId, usize, Vec<Letter>);

/// Breadth-first search over commute and braid moves at fixed word length.
/// `target` selects the goal: a concrete word, or any word with a doubled
/// adjacent pair. Returns the step list (positions are word-local).
fn move_search(
    dim: usize,
    start: &[Letter],
    target: Option<&[Letter]>,
    budget: &mut usize,
) -> Result<Option<Vec<MoveStep>>, PermError> {
    let reached = |w: &[Letter]| -> bool {
        match target {
            Some(t) => w == t,
            None => {
                (0..w.len().saturating_sub(1)).any(|p| w[p].index_set() == w[p + 1].index_set())
            }
        }
    };
    if reached(start) {
        return Ok(Some(Vec::new()));
    }
    type Key = Vec<Letter>;
    let mut parent: BTreeMap<Key, (Key, AxiomId, usize)> = BTreeMap::new();
    let mut queue: VecDeque<Key> = VecDeque::new();
    parent.insert(start.to_vec(), (Vec::new(), AxiomId::Commute, usize::MAX));
    queue.push_back(start.to_vec());
    while let Some(w) = queue.pop_front() {
        let mut moves: Vec<MoveStep> = Vec::new();
        for p in 0..w.len().saturating_sub(1) {
            if is_transposition_pair_disjoint(w[p], w[p + 1]) {
                let mut nw = w.clone();
                nw.swap(p, p + 1);
                moves.push((AxiomId::Commute, p, nw));
            }
        }
        for p in 0..w.len().saturating_sub(2) {
            let (a, b, c) = (w[p], w[p + 1], w[p + 2]);
            if a.index_set() == c.index_set()
                && !is_transposition_pair_disjoint(a, b)
                && a.index_set() != b.index_set()
            {
                let mut nw = w.clone();
                nw[p] = b;
                nw[p + 1] = a;
                nw[p + 2] = b;
                moves.push((AxiomId::Braid, p, nw));
            }
        }
        for (ax, p, nw) in moves {
            if parent.contains_key(&nw) {
                continue;
            }
            if *budget == 0 {
                return Err(PermError::TraceBudget {
                    nodes: parent.len(),
                });
            }
            *budget -= 1;
            parent.insert(nw.clone(), (w.clone(), ax, p));
            if reached(&nw) {
                let mut path = Vec::new();
                let mut cur = nw;
                while cur != start {
                    let (prev, ax, p) = parent.get(&cur).expect("recorded").clone();
                    path.push((ax, p, cur.clone()));
                    cur = prev;
                }
                path.reverse();
                return Ok(Some(path));
            }
            queue.push_back(nw);
        }
    }
    let _ = dim;
    Ok(None)
}

/// Canonical form of a transposition word together with a step-by-step
/// trace using only instances of relations 4, 5 and 6.
///
/// The canonical word is the bubble-sort normal form of the hat value.
/// Non-adjacent letters are first expanded through the conjugation form of
/// relation 6; the adjacent-letter word is then normalized prefix by
/// prefix, using Tits moves (commute and braid) with one cancellation per
/// length drop.
pub fn coxeter_normal_form(
    w: &SubstWord,
    config: &Config,
) -> Result<(SubstWord, ProofTrace), PermError> {
    if !w.is_transposition_only() {
        return Err(PermError::ReplacementInTa);
    }
    let dim = w.dim;
    let mut budget = config.trace_node_budget;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut word = w.letters.clone();

    // expand non-adjacent letters: s[i,k] -> s[k-1,k] s[i,k-1] s[k-1,k]
    loop {
        let mut changed = false;
        for p in 0..word.len() {
            if adjacent_index(word[p]).is_some() {
                continue;
            }
            let (i, k) = word[p].index_set();
            debug_assert!(k > i + 1);
            let outer = Letter::Transpose(k - 1, k);
            let inner = Letter::Transpose(i, k - 1);
            word.splice(p..p + 1, [outer, inner, outer]);
            steps.push(TraceStep {
                axiom: AxiomId::Braid,
                pos: p,
                word: SubstWord {
                    dim,
                    letters: word.clone(),
                },
            });
            changed = true;
            break;
        }
        if !changed {
            break;
        }
    }

    // normalize left to right: keep a canonical prefix, absorb one letter
    // at a time
    let mut prefix_len = 0usize; // the prefix word[..prefix_len] is canonical
    let mut prefix_hat = Transformation::identity(dim);
    while prefix_len < word.len() {
        let letter = word[prefix_len];
        let lt = letter.transformation(dim)?;
        let new_hat = compose(&prefix_hat, &lt)?;
        let target = canonical_word(&new_hat)?;
        let region_end = prefix_len + 1;
        let mut region: Vec<Letter> = word[..region_end].to_vec();
        let suffix: Vec<Letter> = word[region_end..].to_vec();
        let mut local: Vec<MoveStep> = Vec::new();

        if new_hat.inversions() < region.len() {
            // one cancellation is owed: surface a doubled pair, delete it
            let to_pair = move_search(dim, &region, None, &mut budget)?
                .expect("a non-reduced word admits a doubled pair under Tits moves");
            for (ax, p, nw) in to_pair {
                region = nw.clone();
                local.push((ax, p, nw));
            }
            let p = (0..region.len() - 1)
                .find(|&p| region[p].index_set() == region[p + 1].index_set())
                .expect("search goal");
            region.splice(p..p + 2, []);
            local.push((AxiomId::Involution, p, region.clone()));
        }
        if region != target.letters {
            let to_canon = move_search(dim, &region, Some(&target.letters), &mut budget)?
                .expect("reduced words of one element are joined by Tits moves");
            for (ax, p, nw) in to_canon {
                region = nw.clone();
                local.push((ax, p, nw));
            }
        }
        for (ax, p, region_word) in local {
            let mut full = region_word;
            full.extend_from_slice(&suffix);
            steps.push(TraceStep {
                axiom: ax,
                pos: p,
                word: SubstWord { dim, letters: full },
            });
        }
        word = {
            let mut full = region;
            full.extend_from_slice(&suffix);
            full
        };
        prefix_len = target.letters.len();
        prefix_hat = new_hat;
    }

    let end = SubstWord { dim, letters: word };
    let trace = ProofTrace {
        start: w.clone(),
        end: end.clone(),
        steps,
    };
    Ok((end, trace))
}
