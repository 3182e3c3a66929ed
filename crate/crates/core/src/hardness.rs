//! Generators for the hardness reductions: splitting two-position Thue
//! rules, encoding a Thue system as an H-word digraph, turning H-words into
//! vertex cover reconfiguration, and lifting edges to triangles.
//!
//! Generated symbols live in a reserved namespace: their names start with
//! `~`, which user-supplied symbols may not do.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, Instance, LengthMode, ProblemKind, Vertex, VertexSet};
use crate::td::TreeDecomposition;

pub type Symbol = usize;
pub type Word = Vec<Symbol>;

pub const RESERVED_PREFIX: char = '~';

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HardnessError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is not allowed (names must be nonempty, without whitespace or '.', and not start with '~')")]
    BadSymbolName(String),
    #[error("rule {0} does not relate two words of length 2")]
    NotTwoBalanced(usize),
    #[error("rule {0} changes both positions; split the rules first")]
    NotSplit(usize),
    #[error("words have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("`{0}` is not a walk in the digraph")]
    NotAWord(String),
    #[error("words must have length at least {min}, got {len}")]
    TooShort { len: usize, min: usize },
    #[error("expected a {expected} instance, got {found}")]
    WrongKind { expected: ProblemKind, found: ProblemKind },
}

/// Named symbols with lookup by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: BTreeMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let mut a = Alphabet::default();
        for name in names {
            a.push(name.into());
        }
        a
    }

    /// Append a symbol, returning its id; existing names are reused.
    pub fn push(&mut self, name: String) -> Symbol {
        if let Some(&s) = self.index.get(&name) {
            return s;
        }
        let s = self.names.len();
        self.index.insert(name.clone(), s);
        self.names.push(name);
        s
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    /// Symbols joined by `.`, or concatenated when every name is one
    /// character long.
    pub fn format_word(&self, w: &[Symbol]) -> String {
        let parts: Vec<&str> = w.iter().map(|&s| self.name(s)).collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    /// Parse a word: `.`-separated names, a single declared name, or a
    /// string of one-character names.
    pub fn parse_word(&self, text: &str) -> Result<Word, HardnessError> {
        let lookup = |name: &str| {
            self.get(name)
                .ok_or_else(|| HardnessError::UnknownSymbol(name.to_string()))
        };
        if text.contains('.') {
            return text.split('.').map(lookup).collect();
        }
        if let Some(s) = self.get(text) {
            return Ok(vec![s]);
        }
        text.chars().map(|c| lookup(&c.to_string())).collect()
    }

    /// All words of length `len`, in lexicographic order of symbol ids.
    pub fn words(&self, len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..self.len()).map(move |s| {
                        let mut next = w.clone();
                        next.push(s);
                        next
                    })
                })
                .collect();
        }
        out
    }
}

fn check_user_name(name: &str) -> Result<(), HardnessError> {
    if name.is_empty() || name.contains('.') || name.contains(char::is_whitespace) || name.starts_with(RESERVED_PREFIX)
    {
        Err(HardnessError::BadSymbolName(name.to_string()))
    } else {
        Ok(())
    }
}

/// A digraph whose walks are the admissible words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordDigraph {
    pub symbols: Alphabet,
    pub arcs: BTreeSet<(Symbol, Symbol)>,
    /// Symbols that are not pair symbols, when the digraph encodes a Thue
    /// system.
    pub special: BTreeSet<Symbol>,
}

impl WordDigraph {
    pub fn with_symbols<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        WordDigraph {
            symbols: Alphabet::new(names),
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn add_arc(&mut self, a: Symbol, b: Symbol) {
        self.arcs.insert((a, b));
    }

    pub fn has_arc(&self, a: Symbol, b: Symbol) -> bool {
        self.arcs.contains(&(a, b))
    }

    pub fn is_word(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&s| s < self.len()) && w.windows(2).all(|p| self.has_arc(p[0], p[1]))
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        self.symbols.format_word(w)
    }

    /// All walks with `len` symbols.
    pub fn words(&self, len: usize) -> Vec<Word> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out: Vec<Word> = (0..self.len()).map(|s| vec![s]).collect();
        for _ in 1..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().expect("nonempty");
                    self.arcs.range((last, 0)..(last + 1, 0)).map(move |&(_, b)| {
                        let mut next = w.clone();
                        next.push(b);
                        next
                    })
                })
                .collect();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("h {}\n", self.len());
        for name in self.symbols.names() {
            writeln!(out, "s {name}").expect("write to string");
        }
        for &(a, b) in &self.arcs {
            writeln!(out, "a {} {}", self.symbols.name(a), self.symbols.name(b)).expect("write to string");
        }
        out
    }
}

/// Parse a digraph file: `h <count>`, then `s <name>` declarations and
/// `a <from> <to>` arcs; `c` lines are comments.
pub fn parse_digraph(text: &str) -> Result<WordDigraph, HardnessError> {
    let mut declared: Option<usize> = None;
    let mut h = WordDigraph::default();
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        let parse_err = |reason: &str| HardnessError::Parse {
            line,
            reason: reason.to_string(),
        };
        match fields.as_slice() {
            [] | ["c", ..] => {}
            ["h", count] if declared.is_none() => {
                declared = Some(
                    count
                        .parse()
                        .map_err(|_| parse_err("symbol count must be an integer"))?,
                );
            }
            ["h", ..] => return Err(parse_err("expected a single header `h <count>`")),
            _ if declared.is_none() => return Err(parse_err("expected header `h <count>` first")),
            ["s", name] => {
                check_user_name(name)?;
                if h.symbols.get(name).is_some() {
                    return Err(HardnessError::DuplicateSymbol(name.to_string()));
                }
                h.symbols.push(name.to_string());
            }
            ["a", from, to] => arcs.push((from.to_string(), to.to_string())),
            _ => return Err(parse_err("expected `s <name>`, `a <from> <to>` or `c ...`")),
        }
    }
    let count = declared.ok_or(HardnessError::Parse {
        line: 0,
        reason: "missing header `h <count>`".into(),
    })?;
    if count != h.len() {
        return Err(HardnessError::Parse {
            line: 0,
            reason: format!("header declares {count} symbols, found {}", h.len()),
        });
    }
    for (a, b) in arcs {
        let sym = |n: &str| {
            h.symbols
                .get(n)
                .ok_or_else(|| HardnessError::UnknownSymbol(n.to_string()))
        };
        let (a, b) = (sym(&a)?, sym(&b)?);
        h.add_arc(a, b);
    }
    Ok(h)
}

/// A symmetric rewriting system on words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThueSystem {
    pub symbols: Alphabet,
    pub rules: Vec<(Word, Word)>,
}

impl ThueSystem {
    pub fn is_two_balanced(&self) -> bool {
        self.rules.iter().all(|(l, r)| l.len() == 2 && r.len() == 2)
    }

    /// Every rule changes at most one of its two positions.
    pub fn is_split(&self) -> bool {
        self.rules.iter().all(|(l, r)| l[0] == r[0] || l[1] == r[1])
    }

    /// All words obtained from `w` by one rule application in either
    /// direction, deduplicated and sorted.
    pub fn rewrites(&self, w: &Word) -> Vec<Word> {
        let mut out = BTreeSet::new();
        for (l, r) in &self.rules {
            for (from, to) in [(l, r), (r, l)] {
                if from.len() > w.len() || from.len() != to.len() {
                    continue;
                }
                for i in 0..=w.len() - from.len() {
                    if w[i..i + from.len()] == from[..] {
                        let mut next = w.clone();
                        next[i..i + to.len()].copy_from_slice(to);
                        if next != *w {
                            out.insert(next);
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in self.symbols.names() {
            writeln!(out, "s {name}").expect("write to string");
        }
        for (l, r) in &self.rules {
            writeln!(out, "r {} {}", self.symbols.format_word(l), self.symbols.format_word(r))
                .expect("write to string");
        }
        out
    }
}

/// Parse a Thue file: `s <name>` declarations followed by `r <w1> <w2>`
/// rules over length-2 words; `c` lines are comments. Generated (`~`)
/// names are accepted here so split systems round-trip.
pub fn parse_thue(text: &str) -> Result<ThueSystem, HardnessError> {
    let mut ts = ThueSystem::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.as_slice() {
            [] | ["c", ..] => {}
            ["s", name] => {
                let stripped = name.strip_prefix(RESERVED_PREFIX).unwrap_or(name);
                check_user_name(stripped)?;
                if ts.symbols.get(name).is_some() {
                    return Err(HardnessError::DuplicateSymbol(name.to_string()));
                }
                ts.symbols.push(name.to_string());
            }
            ["r", l, r] => {
                let l = ts.symbols.parse_word(l)?;
                let r = ts.symbols.parse_word(r)?;
                if l.len() != 2 || r.len() != 2 {
                    return Err(HardnessError::NotTwoBalanced(ts.rules.len() + 1));
                }
                ts.rules.push((l, r));
            }
            _ => {
                return Err(HardnessError::Parse {
                    line,
                    reason: "expected `s <name>`, `r <w1> <w2>` or `c ...`".into(),
                })
            }
        }
    }
    Ok(ts)
}

fn fresh(symbols: &mut Alphabet, stem: &str) -> Symbol {
    let mut i = 1;
    loop {
        let name = format!("{RESERVED_PREFIX}{stem}{i}");
        if symbols.get(&name).is_none() {
            return symbols.push(name);
        }
        i += 1;
    }
}

/// Replace every rule `{a1 a2, b1 b2}` that changes both positions by four
/// one-position rules through two fresh symbols X, Y:
/// `a1 a2 ~ X a2 ~ X Y ~ b1 Y ~ b1 b2`.
pub fn split_thue_rules(ts: &ThueSystem) -> Result<ThueSystem, HardnessError> {
    if let Some(i) = ts.rules.iter().position(|(l, r)| l.len() != 2 || r.len() != 2) {
        return Err(HardnessError::NotTwoBalanced(i + 1));
    }
    let mut out = ThueSystem {
        symbols: ts.symbols.clone(),
        rules: Vec::new(),
    };
    for (l, r) in &ts.rules {
        if l[0] == r[0] || l[1] == r[1] {
            out.rules.push((l.clone(), r.clone()));
            continue;
        }
        let x = fresh(&mut out.symbols, "X");
        let y = fresh(&mut out.symbols, "Y");
        let (a1, a2, b1, b2) = (l[0], l[1], r[0], r[1]);
        out.rules.extend([
            (vec![a1, a2], vec![x, a2]),
            (vec![x, a2], vec![x, y]),
            (vec![x, y], vec![b1, y]),
            (vec![b1, y], vec![b1, b2]),
        ]);
    }
    Ok(out)
}

/// The digraph of a split Thue system together with the encoding `psi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThueEncoding {
    pub digraph: WordDigraph,
    pub begin: Symbol,
    pub end: Symbol,
    /// `pair[a][b]` for `a, b` in `0..=g`, where `g` stands for the blank.
    pub pair: Vec<Vec<Symbol>>,
    pub blank: usize,
}

impl ThueEncoding {
    /// `begin (blank,a1) (a1,a2) ... (an,blank) end`.
    pub fn psi(&self, w: &[Symbol]) -> Word {
        let mut out = vec![self.begin];
        let mut prev = self.blank;
        for &a in w {
            out.push(self.pair[prev][a]);
            prev = a;
        }
        out.push(self.pair[prev][self.blank]);
        out.push(self.end);
        out
    }
}

/// Build the H-word digraph of a split, 2-balanced Thue system.
///
/// Symbols: begin, end, one `x_i` per rule, and every pair over the
/// alphabet plus a blank. Arcs: `(a,b) -> (b,c)` for `b` a letter and `a, c`
/// letters or blank; `begin -> (blank,a)`; `(a,blank) -> end`; and for rule
/// `{a1 a2, b1 b2}`: `(.,a1) -> x_i`, `(.,b1) -> x_i`, `x_i -> (a2,.)`,
/// `x_i -> (b2,.)` where `.` is a letter or blank.
#[allow(clippy::needless_range_loop)]
pub fn thue_encoding(ts: &ThueSystem) -> Result<ThueEncoding, HardnessError> {
    if let Some(i) = ts.rules.iter().position(|(l, r)| l.len() != 2 || r.len() != 2) {
        return Err(HardnessError::NotTwoBalanced(i + 1));
    }
    if let Some(i) = ts.rules.iter().position(|(l, r)| l[0] != r[0] && l[1] != r[1]) {
        return Err(HardnessError::NotSplit(i + 1));
    }
    let g = ts.symbols.len();
    let blank = g;
    let label = |a: usize| {
        if a == blank {
            format!("{RESERVED_PREFIX}box")
        } else {
            ts.symbols.name(a).to_string()
        }
    };
    let mut symbols = Alphabet::default();
    let begin = symbols.push(format!("{RESERVED_PREFIX}begin"));
    let end = symbols.push(format!("{RESERVED_PREFIX}end"));
    let xs: Vec<Symbol> = (1..=ts.rules.len())
        .map(|i| symbols.push(format!("{RESERVED_PREFIX}x{i}")))
        .collect();
    let pair: Vec<Vec<Symbol>> = (0..=g)
        .map(|a| {
            (0..=g)
                .map(|b| symbols.push(format!("{RESERVED_PREFIX}({},{})", label(a), label(b))))
                .collect()
        })
        .collect();
    let special = [begin, end].into_iter().chain(xs.iter().copied()).collect();
    let mut h = WordDigraph {
        symbols,
        arcs: BTreeSet::new(),
        special,
    };
    for b in 0..g {
        for a in 0..=g {
            for c in 0..=g {
                h.add_arc(pair[a][b], pair[b][c]);
            }
        }
        h.add_arc(begin, pair[blank][b]);
        h.add_arc(pair[b][blank], end);
    }
    for (i, (l, r)) in ts.rules.iter().enumerate() {
        for any in 0..=g {
            h.add_arc(pair[any][l[0]], xs[i]);
            h.add_arc(pair[any][r[0]], xs[i]);
            h.add_arc(xs[i], pair[l[1]][any]);
            h.add_arc(xs[i], pair[r[1]][any]);
        }
    }
    Ok(ThueEncoding {
        digraph: h,
        begin,
        end,
        pair,
        blank,
    })
}

/// Encode a word-problem instance `(s, t)` as an H-word reachability
/// instance.
pub fn thue_to_hword(ts: &ThueSystem, s: &Word, t: &Word) -> Result<(WordDigraph, Word, Word), HardnessError> {
    if s.len() != t.len() {
        return Err(HardnessError::LengthMismatch(s.len(), t.len()));
    }
    let enc = thue_encoding(ts)?;
    let (ps, pt) = (enc.psi(s), enc.psi(t));
    Ok((enc.digraph, ps, pt))
}

/// Vertex for symbol `a` at position `i` (both 0-based).
pub fn word_vertex(alphabet: usize, i: usize, a: Symbol) -> Vertex {
    i * alphabet + a
}

/// The cover of `G_n` leaving out exactly the word's symbol at each
/// position.
pub fn word_cover(alphabet: usize, w: &[Symbol]) -> VertexSet {
    (0..w.len())
        .flat_map(|i| {
            (0..alphabet)
                .filter(move |&a| a != w[i])
                .map(move |a| word_vertex(alphabet, i, a))
        })
        .collect()
}

/// The graph `G_n`: a clique on each position's symbols and an edge between
/// consecutive positions for every pair that is not an arc.
pub fn word_graph(h: &WordDigraph, n: usize) -> Graph {
    let q = h.len();
    let mut g = Graph::empty(n * q);
    for i in 0..n {
        for a in 0..q {
            for b in a + 1..q {
                g.add_edge(word_vertex(q, i, a), word_vertex(q, i, b));
            }
            if i + 1 < n {
                for b in 0..q {
                    if !h.has_arc(a, b) {
                        g.add_edge(word_vertex(q, i, a), word_vertex(q, i + 1, b));
                    }
                }
            }
        }
    }
    g
}

/// Reduce H-word reachability to vertex cover reconfiguration: capacity is
/// one above the cover size `n(|Sigma|-1)`, and the length bound is
/// `min(2 n |Sigma|^n, cap)` in at-most mode. Also returns the path
/// decomposition with bags `V_i u V_{i+1}`.
pub fn hword_to_vcr(
    h: &WordDigraph,
    s: &Word,
    t: &Word,
    cap: usize,
) -> Result<(Instance, TreeDecomposition), HardnessError> {
    if s.len() != t.len() {
        return Err(HardnessError::LengthMismatch(s.len(), t.len()));
    }
    if s.len() < 2 {
        return Err(HardnessError::TooShort { len: s.len(), min: 2 });
    }
    for w in [s, t] {
        if !h.is_word(w) {
            return Err(HardnessError::NotAWord(h.format_word(w)));
        }
    }
    let (n, q) = (s.len(), h.len());
    let k = n * (q - 1);
    let ell = (q as u128)
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(2 * n as u128))
        .map_or(usize::MAX, |x| usize::try_from(x).unwrap_or(usize::MAX))
        .min(cap);
    let inst = Instance {
        graph: word_graph(h, n),
        source: word_cover(q, s),
        target: word_cover(q, t),
        capacity: k + 1,
        length: ell,
        kind: ProblemKind::VertexCover,
        mode: LengthMode::AtMost,
    };
    let bags = (0..n - 1)
        .map(|i| (word_vertex(q, i, 0)..word_vertex(q, i + 2, 0)).collect())
        .collect();
    let edges = (1..n - 1).map(|i| (i - 1, i)).collect();
    Ok((inst, TreeDecomposition::new(bags, edges)))
}

/// Replace every edge `uv` by a triangle through a fresh vertex, turning a
/// vertex cover instance into a feedback vertex set instance.
pub fn triangle_lift(inst: &Instance) -> Result<Instance, HardnessError> {
    if inst.kind != ProblemKind::VertexCover {
        return Err(HardnessError::WrongKind {
            expected: ProblemKind::VertexCover,
            found: inst.kind,
        });
    }
    let mut g = inst.graph.clone();
    for &(u, v) in inst.graph.edges() {
        let w = g.add_vertex();
        g.add_edge(u, w);
        g.add_edge(w, v);
    }
    Ok(Instance {
        graph: g,
        kind: ProblemKind::FeedbackVertexSet,
        ..inst.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bfs_hword, bfs_reconfig, enumerate_feasible, thue_reachable};

    fn ab_digraph() -> WordDigraph {
        parse_digraph("c example\nh 2\ns a\ns b\na a b\na b a\na b b\n").unwrap()
    }

    #[test]
    fn digraph_file_round_trip() {
        let h = ab_digraph();
        assert_eq!(h.len(), 2);
        assert!(h.has_arc(0, 1) && !h.has_arc(0, 0));
        assert_eq!(parse_digraph(&h.to_text()).unwrap(), h);
        assert!(matches!(
            parse_digraph("h 1\ns a\ns b\n"),
            Err(HardnessError::Parse { .. })
        ));
        assert!(matches!(
            parse_digraph("h 1\ns a\na a z\n"),
            Err(HardnessError::UnknownSymbol(_))
        ));
        assert!(matches!(
            parse_digraph("h 1\ns ~a\n"),
            Err(HardnessError::BadSymbolName(_))
        ));
        assert!(matches!(
            parse_digraph("s a\n"),
            Err(HardnessError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn word_syntax() {
        let a = Alphabet::new(["a", "bb", "c"]);
        assert_eq!(a.parse_word("a.bb.c").unwrap(), vec![0, 1, 2]);
        assert_eq!(a.parse_word("bb").unwrap(), vec![1]);
        assert_eq!(a.parse_word("ac").unwrap(), vec![0, 2]);
        assert_eq!(a.format_word(&[0, 1]), "a.bb");
        assert!(a.parse_word("ax").is_err());
    }

    #[test]
    fn thue_file_and_rewrites() {
        let ts = parse_thue("s a\ns b\ns c\nr ab ca\n").unwrap();
        assert!(ts.is_two_balanced());
        let w = ts.symbols.parse_word("abab").unwrap();
        let next: Vec<String> = ts.rewrites(&w).iter().map(|w| ts.symbols.format_word(w)).collect();
        assert_eq!(next, vec!["abca", "caab"]);
        assert_eq!(parse_thue(&ts.to_text()).unwrap(), ts);
        assert!(matches!(
            parse_thue("s a\nr aaa aa\n"),
            Err(HardnessError::NotTwoBalanced(1))
        ));
    }

    #[test]
    fn split_examples() {
        let ts = parse_thue("s a\ns b\ns c\ns d\nr ab cd\n").unwrap();
        let split = split_thue_rules(&ts).unwrap();
        assert_eq!(split.rules.len(), 4);
        assert_eq!(split.symbols.len(), 6);
        assert!(split.is_split());
        assert!(split.symbols.names()[4..]
            .iter()
            .all(|n| n.starts_with(RESERVED_PREFIX)));
        let text = split.to_text();
        assert_eq!(parse_thue(&text).unwrap(), split);
        let kept = parse_thue("s a\ns b\ns c\nr ab cb\n").unwrap();
        assert_eq!(split_thue_rules(&kept).unwrap(), kept);
    }

    #[test]
    fn encoding_sizes() {
        let ts = parse_thue("s a\ns b\nr ab bb\n").unwrap();
        let enc = thue_encoding(&ts).unwrap();
        assert_eq!(enc.digraph.len(), 2 + 1 + 3 * 3);
        let w = ts.symbols.parse_word("aba").unwrap();
        let psi = enc.psi(&w);
        assert_eq!(psi.len(), w.len() + 3);
        assert!(enc.digraph.is_word(&psi));
        assert!(psi
            .windows(2)
            .all(|p| !(enc.digraph.special.contains(&p[0]) && enc.digraph.special.contains(&p[1]))));
        let unsplit = parse_thue("s a\ns b\nr ab ba\n").unwrap();
        assert_eq!(thue_encoding(&unsplit), Err(HardnessError::NotSplit(1)));
        assert!(matches!(
            thue_to_hword(&ts, &vec![0], &vec![0, 1]),
            Err(HardnessError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn encoding_tracks_a_rule_application() {
        let ts = parse_thue("s a\ns b\nr ab bb\n").unwrap();
        let s = ts.symbols.parse_word("ab").unwrap();
        let t = ts.symbols.parse_word("bb").unwrap();
        let (h, ps, pt) = thue_to_hword(&ts, &s, &t).unwrap();
        assert_eq!(thue_reachable(&ts, &s, &t), Ok(true));
        assert_eq!(bfs_hword(&h, &ps, &pt), Ok(true));
        let u = ts.symbols.parse_word("ba").unwrap();
        assert_eq!(thue_reachable(&ts, &s, &u), Ok(false));
        let pu = thue_encoding(&ts).unwrap().psi(&u);
        assert_eq!(bfs_hword(&h, &ps, &pu), Ok(false));
    }

    #[test]
    fn word_graph_example() {
        let h = ab_digraph();
        let (inst, td) = hword_to_vcr(&h, &vec![0, 1], &vec![1, 0], usize::MAX).unwrap();
        assert_eq!(inst.graph.n(), 4);
        assert_eq!(inst.graph.m(), 3);
        assert!(inst.graph.has_edge(0, 2));
        assert_eq!(inst.capacity, 3);
        assert_eq!(inst.mode, LengthMode::AtMost);
        assert_eq!(inst.length, 2 * 4 * 2);
        let covers = enumerate_feasible(&inst.graph, 2, ProblemKind::VertexCover).unwrap();
        assert_eq!(covers.len(), h.words(2).len());
        assert_eq!(covers.len(), 3);
        td.validate(&inst.graph).unwrap();
        assert!(td.bags.iter().all(|b| b.len() == 4));
        assert!(bfs_reconfig(&inst).unwrap().reachable);
        assert_eq!(bfs_hword(&h, &vec![0, 1], &vec![1, 0]), Ok(true));
        assert!(matches!(
            hword_to_vcr(&h, &vec![0, 0], &vec![0, 1], 10),
            Err(HardnessError::NotAWord(_))
        ));
        assert!(matches!(
            hword_to_vcr(&h, &vec![0], &vec![1], 10),
            Err(HardnessError::TooShort { .. })
        ));
    }

    #[test]
    fn triangle_lift_counts() {
        let inst = Instance {
            graph: Graph::from_edges(3, [(0, 1), (1, 2)]),
            source: [1].into_iter().collect(),
            target: [1].into_iter().collect(),
            capacity: 1,
            length: 0,
            kind: ProblemKind::VertexCover,
            mode: LengthMode::Exact,
        };
        let lifted = triangle_lift(&inst).unwrap();
        assert_eq!((lifted.graph.n(), lifted.graph.m()), (5, 6));
        assert_eq!(lifted.kind, ProblemKind::FeedbackVertexSet);
        assert!(crate::oracle::oracle_answer(&lifted).unwrap().is_some());
        assert!(triangle_lift(&lifted).is_err());
    }
}
