use std::fmt;

use crate::error::{Error, Result};

/// One letter of a group word: a generator index (1-based) and an exponent
/// of ±1. Larger exponents are expanded at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

/// A word in the free group on the presentation's generators.
///
/// Words are kept exactly as written: free reduction is available through
/// [`GroupWord::free_reduced`] but never applied automatically, so relators
/// enter the relation system in their source form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|l| l.exp == 1 || l.exp == -1));
        GroupWord { letters }
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

    /// The inverse word: letters reversed with exponents flipped.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen,
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    /// Free reduction: repeatedly cancel adjacent `g g^{-1}` pairs.
    pub fn free_reduced(&self) -> GroupWord {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match stack.last() {
                Some(top) if top.gen == l.gen && top.exp == -l.exp => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        GroupWord { letters: stack }
    }
}

/// Order annotation of the presented group. Finiteness is never inferred
/// from the relators (that is undecidable); it is part of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrder {
    Infinite,
    Finite(u64),
}

impl GroupOrder {
    /// β₀ of the group: 0 for infinite groups, 1/|Γ| for finite ones.
    pub fn beta0(&self) -> f64 {
        match self {
            GroupOrder::Infinite => 0.0,
            GroupOrder::Finite(n) => 1.0 / (*n as f64),
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Infinite => write!(f, "infinite"),
            GroupOrder::Finite(n) => write!(f, "finite {n}"),
        }
    }
}

/// A finite group presentation: named generators, relators as written, and
/// the order annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
    pub order: GroupOrder,
}

impl Presentation {
    /// Number of generators (the `m` of the relation system).
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    /// Renders a word with the presentation's generator names, e.g.
    /// `a b a^-1 b^-1`.
    pub fn word_text(&self, word: &GroupWord) -> String {
        word.letters()
            .iter()
            .map(|l| {
                let name = &self.generators[l.gen - 1];
                if l.exp == 1 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses the line-oriented presentation grammar:
///
/// ```text
/// group <name>            # optional
/// gens <id> <id> ...
/// rel <word>              # zero or more
/// rels (none)             # explicit empty relator list, also accepted
/// order infinite | order finite <k>
/// ```
///
/// A word is whitespace-separated tokens `gen` or `gen^<nonzero int>`; `#`
/// starts a comment. `;` is accepted as a statement separator so one-line
/// inputs parse. Errors carry line and column (1-based).
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name: Option<String> = None;
    let mut generators: Option<Vec<String>> = None;
    let mut relator_specs: Vec<(Vec<(String, i64, usize, usize)>, usize)> = Vec::new();
    let mut order: Option<GroupOrder> = None;
    let mut saw_rels_none = false;

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        for stmt in split_statements(line) {
            let tokens = tokenize(stmt.text, line_no, stmt.col_offset);
            if tokens.is_empty() {
                continue;
            }
            let (kw, kw_col) = (&tokens[0].0, tokens[0].1);
            let args = &tokens[1..];
            match kw.as_str() {
                "group" => {
                    if args.len() != 1 {
                        return Err(Error::parse(line_no, kw_col, "expected: group <name>"));
                    }
                    if name.is_some() {
                        return Err(Error::parse(line_no, kw_col, "duplicate group directive"));
                    }
                    name = Some(args[0].0.clone());
                }
                "gens" => {
                    if generators.is_some() {
                        return Err(Error::parse(line_no, kw_col, "duplicate gens directive"));
                    }
                    if args.is_empty() {
                        return Err(Error::parse(line_no, kw_col, "gens needs at least one name"));
                    }
                    let mut gens = Vec::new();
                    for (g, col) in args {
                        if gens.contains(g) {
                            return Err(Error::parse(
                                line_no,
                                *col,
                                format!("duplicate generator '{g}'"),
                            ));
                        }
                        gens.push(g.clone());
                    }
                    generators = Some(gens);
                }
                "rel" => {
                    if args.is_empty() {
                        return Err(Error::parse(line_no, kw_col, "rel needs a nonempty word"));
                    }
                    let mut letters = Vec::new();
                    for (tok, col) in args {
                        let (gen, exp) = parse_letter(tok, line_no, *col)?;
                        letters.push((gen, exp, line_no, *col));
                    }
                    relator_specs.push((letters, line_no));
                }
                "rels" => {
                    // `rels (none)` is an explicit way to state an empty
                    // relator list; anything else under `rels` is an error.
                    let joined: Vec<&str> = args.iter().map(|(t, _)| t.as_str()).collect();
                    if joined == ["(none)"] {
                        saw_rels_none = true;
                    } else {
                        return Err(Error::parse(
                            line_no,
                            kw_col,
                            "only 'rels (none)' is accepted; use 'rel <word>' for relators",
                        ));
                    }
                }
                "order" => {
                    if order.is_some() {
                        return Err(Error::parse(line_no, kw_col, "duplicate order directive"));
                    }
                    order = Some(parse_order(args, line_no, kw_col)?);
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        kw_col,
                        format!("unknown directive '{other}'"),
                    ));
                }
            }
        }
    }

    let generators = generators
        .ok_or_else(|| Error::parse(1, 1, "missing gens directive"))?;
    let order = order.ok_or_else(|| {
        Error::parse(1, 1, "missing order annotation (order infinite | order finite <k>)")
    })?;
    if saw_rels_none && !relator_specs.is_empty() {
        return Err(Error::parse(1, 1, "'rels (none)' conflicts with rel directives"));
    }

    let mut relators = Vec::new();
    for (letters, _line) in relator_specs {
        let mut expanded = Vec::new();
        for (gen_name, exp, line_no, col) in letters {
            let gen = generators
                .iter()
                .position(|g| *g == gen_name)
                .ok_or_else(|| {
                    Error::parse(line_no, col, format!("unknown generator '{gen_name}'"))
                })?
                + 1;
            let sign: i8 = if exp > 0 { 1 } else { -1 };
            for _ in 0..exp.unsigned_abs() {
                expanded.push(Letter { gen, exp: sign });
            }
        }
        relators.push(GroupWord::new(expanded));
    }

    Ok(Presentation {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        generators,
        relators,
        order,
    })
}

struct Statement<'a> {
    text: &'a str,
    col_offset: usize,
}

fn split_statements(line: &str) -> Vec<Statement<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (idx, ch) in line.char_indices() {
        if ch == ';' {
            out.push(Statement {
                text: &line[start..idx],
                col_offset: start,
            });
            start = idx + 1;
        }
    }
    out.push(Statement {
        text: &line[start..],
        col_offset: start,
    });
    out
}

fn tokenize(text: &str, _line: usize, col_offset: usize) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    let mut token_start = None;
    for (idx, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = token_start.take() {
                out.push((text[s..idx].to_string(), col_offset + s + 1));
            }
        } else if token_start.is_none() {
            token_start = Some(idx);
        }
    }
    if let Some(s) = token_start {
        out.push((text[s..].to_string(), col_offset + s + 1));
    }
    out
}

fn parse_letter(tok: &str, line: usize, col: usize) -> Result<(String, i64)> {
    match tok.split_once('^') {
        None => Ok((tok.to_string(), 1)),
        Some((gen, exp_str)) => {
            if gen.is_empty() {
                return Err(Error::parse(line, col, "missing generator before '^'"));
            }
            let exp: i64 = exp_str.parse().map_err(|_| {
                Error::parse(line, col, format!("invalid exponent '{exp_str}'"))
            })?;
            if exp == 0 {
                return Err(Error::parse(line, col, "zero exponent is not allowed"));
            }
            Ok((gen.to_string(), exp))
        }
    }
}

fn parse_order(args: &[(String, usize)], line: usize, col: usize) -> Result<GroupOrder> {
    match args {
        [(kind, _)] if kind == "infinite" => Ok(GroupOrder::Infinite),
        [(kind, _), (num, num_col)] if kind == "finite" => {
            let n: u64 = num.parse().map_err(|_| {
                Error::parse(line, *num_col, format!("invalid group order '{num}'"))
            })?;
            if n == 0 {
                return Err(Error::parse(line, *num_col, "group order must be positive"));
            }
            Ok(GroupOrder::Finite(n))
        }
        _ => Err(Error::parse(
            line,
            col,
            "expected: order infinite | order finite <k>",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_free_rank_one() {
        let p = parse_presentation("gens a ; rels (none) ; order infinite").unwrap();
        assert_eq!(p.num_generators(), 1);
        assert!(p.relators.is_empty());
        assert_eq!(p.order, GroupOrder::Infinite);
        assert_eq!(p.order.beta0(), 0.0);
    }

    #[test]
    fn parses_commutator_relator() {
        let p = parse_presentation("gens a b ; rel a b a^-1 b^-1 ; order infinite").unwrap();
        assert_eq!(p.num_generators(), 2);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(
            p.relators[0].letters(),
            &[
                Letter { gen: 1, exp: 1 },
                Letter { gen: 2, exp: 1 },
                Letter { gen: 1, exp: -1 },
                Letter { gen: 2, exp: -1 },
            ]
        );
    }

    #[test]
    fn expands_exponents() {
        let p = parse_presentation("gens a ; rel a^3 ; order finite 3").unwrap();
        assert_eq!(
            p.relators[0].letters(),
            &[Letter { gen: 1, exp: 1 }; 3]
        );
        assert_eq!(p.order, GroupOrder::Finite(3));
        assert!((p.order.beta0() - 1.0 / 3.0).abs() < 1e-15);
        let q = parse_presentation("gens a\nrel a^-2\norder infinite").unwrap();
        assert_eq!(q.relators[0].letters(), &[Letter { gen: 1, exp: -1 }; 2]);
    }

    #[test]
    fn comments_and_multiline() {
        let text = "# full form\ngroup Z2\ngens a b  # two generators\nrel a b a^-1 b^-1\norder infinite\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.name, "Z2");
        assert_eq!(p.generators, vec!["a", "b"]);
    }

    #[test]
    fn error_positions() {
        let err = parse_presentation("gens a\nrel a b\norder infinite").unwrap_err();
        match err {
            crate::error::Error::Parse { line, col, msg } => {
                assert_eq!((line, col), (2, 7));
                assert!(msg.contains("unknown generator 'b'"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_presentation("gens a\nrel a^0\norder infinite").unwrap_err();
        match err {
            crate::error::Error::Parse { line, col, msg } => {
                assert_eq!((line, col), (2, 5));
                assert!(msg.contains("zero exponent"));
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(
            parse_presentation("gens a"),
            Err(crate::error::Error::Parse { .. })
        ));
    }

    #[test]
    fn word_operations() {
        let w = GroupWord::new(vec![
            Letter { gen: 1, exp: 1 },
            Letter { gen: 2, exp: 1 },
            Letter { gen: 2, exp: -1 },
        ]);
        assert_eq!(w.free_reduced().letters(), &[Letter { gen: 1, exp: 1 }]);
        assert_eq!(
            w.inverse().letters(),
            &[
                Letter { gen: 2, exp: 1 },
                Letter { gen: 2, exp: -1 },
                Letter { gen: 1, exp: -1 },
            ]
        );
        assert!(w.inverse().free_reduced().letters().len() == 1);
    }
}
