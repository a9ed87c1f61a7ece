use super::{Atom, ConjunctiveQuery, QueryError, Selection, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Const(String),
    LParen,
    RParen,
    Comma,
    Turnstile,
    Dot,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
    at_line_start: bool,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.char_indices().peekable(),
            line: 1,
            col: 1,
            at_line_start: true,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.at_line_start = true;
        } else {
            self.col += 1;
            if !c.is_whitespace() {
                self.at_line_start = false;
            }
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            line,
            col,
            message: msg.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, QueryError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c == '#' && self.at_line_start {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else if c.is_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else { break };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => {
                    if self.peek() == Some('-') {
                        self.bump();
                        Tok::Turnstile
                    } else {
                        return Err(self.err(line, col, "expected ':-'"));
                    }
                }
                '\'' | '"' => {
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some(q) if q == c => break,
                            Some('\n') | None => {
                                return Err(self.err(line, col, "unterminated string constant"))
                            }
                            Some(ch) => s.push(ch),
                        }
                    }
                    Tok::Const(s)
                }
                c if c.is_ascii_digit() || c == '-' => {
                    let mut s = c.to_string();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_digit() {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if s == "-" {
                        return Err(self.err(line, col, "expected a digit after '-'"));
                    }
                    Tok::Const(s)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut s = c.to_string();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(s)
                }
                other => return Err(self.err(line, col, format!("unexpected character {other:?}"))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> QueryError {
        let (line, col) = self.here();
        QueryError::Syntax {
            line,
            col,
            message: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), QueryError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), QueryError> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), l, c)) => {
                let r = (s.clone(), *l, *c);
                self.pos += 1;
                Ok(r)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    /// `NAME ( term, ... )`, returning raw terms.
    fn atom(&mut self) -> Result<(String, Vec<RawTerm>), QueryError> {
        let (name, _, _) = self.ident("a relation name")?;
        self.expect(Tok::LParen, "'('")?;
        let mut terms = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                let (line, col) = self.here();
                match self.peek().cloned() {
                    Some(Tok::Ident(s)) => {
                        self.pos += 1;
                        terms.push(RawTerm::Var(s, line, col));
                    }
                    Some(Tok::Const(s)) => {
                        self.pos += 1;
                        terms.push(RawTerm::Const(s, line, col));
                    }
                    _ => return Err(self.err("expected a variable or constant")),
                }
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "')' or ','")?;
        Ok((name, terms))
    }
}

enum RawTerm {
    Var(String, usize, usize),
    Const(String, usize, usize),
}

fn end_position(src: &str) -> (usize, usize) {
    let line = src.lines().count().max(1);
    let col = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Parses a single conjunctive query `Q(x, ...) :- R(x, ...), ...` with an
/// optional trailing `.`. Lines starting with `#` are comments.
pub fn parse_query(src: &str) -> Result<ConjunctiveQuery, QueryError> {
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: end_position(src),
    };
    let q = parse_one(&mut p)?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected input after the query"));
    }
    Ok(q)
}

/// Parses a list of queries, one per non-empty line.
pub fn parse_queries(src: &str) -> Result<Vec<ConjunctiveQuery>, QueryError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let q = parse_query(line).map_err(|e| match e {
            QueryError::Syntax { col, message, .. } => QueryError::Syntax {
                line: i + 1,
                col,
                message,
            },
            QueryError::HeadVarNotInBody { var, col, .. } => QueryError::HeadVarNotInBody {
                var,
                line: i + 1,
                col,
            },
            other => other,
        })?;
        out.push(q);
    }
    Ok(out)
}

fn parse_one(p: &mut Parser) -> Result<ConjunctiveQuery, QueryError> {
    let (name, head_raw) = p.atom()?;
    p.expect(Tok::Turnstile, "':-'")?;
    let mut body = vec![p.atom()?];
    while p.peek() == Some(&Tok::Comma) {
        p.pos += 1;
        body.push(p.atom()?);
    }
    if p.peek() == Some(&Tok::Dot) {
        p.pos += 1;
    }

    let mut var_names: Vec<String> = Vec::new();
    let var_id = |s: &str, names: &mut Vec<String>| -> usize {
        if let Some(i) = names.iter().position(|n| n == s) {
            i
        } else {
            names.push(s.to_string());
            names.len() - 1
        }
    };

    let mut atoms = Vec::new();
    let mut seen_relations: Vec<(String, usize)> = Vec::new();
    for (rel, raw) in body {
        let mut terms = Vec::new();
        for t in raw {
            match t {
                RawTerm::Var(s, _, _) => terms.push(Term::Var(var_id(&s, &mut var_names))),
                RawTerm::Const(s, _, _) => terms.push(Term::Const(s)),
            }
        }
        let copy = match seen_relations.iter_mut().find(|(r, _)| *r == rel) {
            Some((_, n)) => {
                *n += 1;
                Some(*n)
            }
            None => {
                seen_relations.push((rel.clone(), 0));
                None
            }
        };
        let alias = match copy {
            Some(n) => format!("{rel}__copy{n}"),
            None => rel.clone(),
        };
        atoms.push(Atom::new(alias, rel, terms, copy.is_some()));
    }

    let mut head = Vec::new();
    for t in head_raw {
        match t {
            RawTerm::Var(s, line, col) => {
                let Some(i) = var_names.iter().position(|n| *n == s) else {
                    return Err(QueryError::HeadVarNotInBody { var: s, line, col });
                };
                if head.contains(&i) {
                    return Err(QueryError::Syntax {
                        line,
                        col,
                        message: format!("head variable {s} listed twice"),
                    });
                }
                head.push(i);
            }
            RawTerm::Const(_, line, col) => {
                return Err(QueryError::Syntax {
                    line,
                    col,
                    message: "constants are not allowed in the head".into(),
                })
            }
        }
    }
    if head.is_empty() {
        return Err(QueryError::Syntax {
            line: 1,
            col: 1,
            message: "the head needs at least one variable".into(),
        });
    }
    Ok(ConjunctiveQuery {
        name,
        head,
        var_names,
        atoms,
    })
}

impl Atom {
    pub(crate) fn new(name: String, relation: String, terms: Vec<Term>, self_join_copy: bool) -> Atom {
        let mut vars = Vec::new();
        let mut columns = Vec::new();
        let mut selection = Selection::default();
        for (col, t) in terms.iter().enumerate() {
            match t {
                Term::Var(v) => match vars.iter().position(|x| x == v) {
                    Some(k) => selection.equal.push((columns[k], col)),
                    None => {
                        vars.push(*v);
                        columns.push(col);
                    }
                },
                Term::Const(c) => selection.constants.push((col, c.clone())),
            }
        }
        Atom {
            name,
            relation,
            terms,
            vars,
            columns,
            selection,
            self_join_copy,
            projection_of: None,
        }
    }
}
