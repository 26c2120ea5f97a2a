//! Line-oriented input grammar.
//!
//! Statements (one per logical line; lines are joined until braces
//! balance; `#` starts a comment):
//!
//! ```text
//! algebra A = nest(2,2,2)
//! embedding phi : A -> B = summands{ (1,1,2); (1,2,2) x2 }
//! ghom g : A -> B = cell(1,1){ (1,1):1 } cell(1,2){ (1,2):1 } cell(2,2){ (2,2):1 }
//! element e : A = { (1,2):1; (2,2):-1 }
//! system S = A -phi-> B -psi-> C
//! ```

use std::collections::BTreeMap;
use std::fmt;

use nestlab_core::embedding::{Embedding, GHom, SummandMap};
use nestlab_core::pisom::GElement;
use nestlab_core::system::DirectSystem;
use nestlab_core::{Cell, NestAlgebra};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parsed named objects, with declaration order retained for printing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub algebras: BTreeMap<String, NestAlgebra>,
    pub embeddings: BTreeMap<String, Embedding>,
    pub ghoms: BTreeMap<String, GHom>,
    pub elements: BTreeMap<String, (String, GElement)>,
    pub systems: BTreeMap<String, (Vec<String>, Vec<String>, DirectSystem)>,
    order: Vec<(String, String)>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Splits input into logical statements: comments stripped, physical lines
/// joined while `{`/`(` exceed their closers.
fn logical_lines(input: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut buf = String::new();
    let mut start = 0usize;
    let mut depth = 0i32;
    for (i, raw) in input.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if buf.is_empty() {
            if line.trim().is_empty() {
                continue;
            }
            start = i + 1;
        }
        buf.push_str(line);
        buf.push(' ');
        depth += line
            .chars()
            .map(|c| match c {
                '{' | '(' => 1,
                '}' | ')' => -1,
                _ => 0,
            })
            .sum::<i32>();
        if depth <= 0 {
            let stmt = buf.trim().to_string();
            if !stmt.is_empty() {
                out.push((start, stmt));
            }
            buf.clear();
            depth = 0;
        }
    }
    let tail = buf.trim().to_string();
    if !tail.is_empty() {
        out.push((start, tail));
    }
    out
}

fn parse_usize_list(s: &str, line: usize) -> Result<Vec<usize>, ParseError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| err(line, format!("expected integer, got '{}'", t.trim())))
        })
        .collect()
}

fn ident(s: &str, line: usize) -> Result<String, ParseError> {
    let s = s.trim();
    if s.is_empty()
        || !s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
    {
        return Err(err(line, format!("invalid name '{s}'")));
    }
    Ok(s.to_string())
}

/// Parses `(a,b):m` pairs separated by `;` inside braces.
fn parse_cell_entries(body: &str, line: usize) -> Result<Vec<(Cell, i64)>, ParseError> {
    let mut out = Vec::new();
    for piece in body.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let inner = piece
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| err(line, format!("expected '(a,b):m', got '{piece}'")))?;
        let cells = parse_usize_list(inner.0, line)?;
        if cells.len() != 2 {
            return Err(err(line, "cell needs exactly two atom indices"));
        }
        let count = inner
            .1
            .trim()
            .strip_prefix(':')
            .ok_or_else(|| err(line, format!("missing ':count' in '{piece}'")))?
            .trim()
            .parse::<i64>()
            .map_err(|_| err(line, format!("bad count in '{piece}'")))?;
        out.push((Cell::new(cells[0], cells[1]), count));
    }
    Ok(out)
}

impl Workspace {
    pub fn parse(input: &str) -> Result<Workspace, ParseError> {
        let mut ws = Workspace::default();
        for (line, stmt) in logical_lines(input) {
            let (kind, rest) = stmt
                .split_once(char::is_whitespace)
                .ok_or_else(|| err(line, format!("incomplete statement '{stmt}'")))?;
            match kind {
                "algebra" => ws.parse_algebra(rest, line)?,
                "embedding" => ws.parse_embedding(rest, line)?,
                "ghom" => ws.parse_ghom(rest, line)?,
                "element" => ws.parse_element(rest, line)?,
                "system" => ws.parse_system(rest, line)?,
                _ => return Err(err(line, format!("unknown statement '{kind}'"))),
            }
        }
        Ok(ws)
    }

    fn declare(&mut self, kind: &str, name: &str, line: usize) -> Result<(), ParseError> {
        if self.order.iter().any(|(_, n)| n == name) {
            return Err(err(line, format!("duplicate name '{name}'")));
        }
        self.order.push((kind.to_string(), name.to_string()));
        Ok(())
    }

    fn algebra(&self, name: &str, line: usize) -> Result<&NestAlgebra, ParseError> {
        self.algebras
            .get(name)
            .ok_or_else(|| err(line, format!("unknown algebra '{name}'")))
    }

    fn parse_algebra(&mut self, rest: &str, line: usize) -> Result<(), ParseError> {
        let (name, rhs) = rest
            .split_once('=')
            .ok_or_else(|| err(line, "expected 'algebra NAME = nest(...)'"))?;
        let name = ident(name, line)?;
        let rhs = rhs.trim();
        let ranks = rhs
            .strip_prefix("nest(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err(line, "expected 'nest(r1,...,rl)'"))?;
        let ranks = parse_usize_list(ranks, line)?;
        let ranks: Vec<u32> = ranks.into_iter().map(|r| r as u32).collect();
        let algebra = NestAlgebra::new(&ranks).map_err(|e| err(line, e.to_string()))?;
        self.declare("algebra", &name, line)?;
        self.algebras.insert(name, algebra);
        Ok(())
    }

    fn parse_arrow_header<'a>(
        &self,
        rest: &'a str,
        line: usize,
    ) -> Result<(String, NestAlgebra, NestAlgebra, &'a str), ParseError> {
        let (name, tail) = rest
            .split_once(':')
            .ok_or_else(|| err(line, "expected 'NAME : A -> B = ...'"))?;
        let name = ident(name, line)?;
        let (arrow, rhs) = tail
            .split_once('=')
            .ok_or_else(|| err(line, "expected '= ...'"))?;
        let (dom, cod) = arrow
            .split_once("->")
            .ok_or_else(|| err(line, "expected 'A -> B'"))?;
        let dom = self.algebra(&ident(dom, line)?, line)?.clone();
        let cod = self.algebra(&ident(cod, line)?, line)?.clone();
        Ok((name, dom, cod, rhs))
    }

    fn parse_embedding(&mut self, rest: &str, line: usize) -> Result<(), ParseError> {
        let (name, dom, cod, rhs) = self.parse_arrow_header(rest, line)?;
        let body = rhs
            .trim()
            .strip_prefix("summands")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('{'))
            .and_then(|r| r.trim_end().strip_suffix('}'))
            .ok_or_else(|| err(line, "expected 'summands{ ... }'"))?;
        let mut summands = Vec::new();
        for piece in body.split(';') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let inner = piece
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| err(line, format!("expected '(f1,...,fl)', got '{piece}'")))?;
            let atoms = parse_usize_list(inner.0, line)?;
            let count = match inner.1.trim() {
                "" => 1usize,
                s => s
                    .strip_prefix('x')
                    .and_then(|n| n.trim().parse().ok())
                    .ok_or_else(|| err(line, format!("expected 'xCOUNT', got '{s}'")))?,
            };
            let map = SummandMap::new(&dom, &cod, &atoms).map_err(|e| err(line, e.to_string()))?;
            for _ in 0..count {
                summands.push(map.clone());
            }
        }
        let phi =
            Embedding::new(dom, cod, summands).map_err(|e| err(line, e.to_string()))?;
        self.declare("embedding", &name, line)?;
        self.embeddings.insert(name, phi);
        Ok(())
    }

    fn parse_ghom(&mut self, rest: &str, line: usize) -> Result<(), ParseError> {
        let (name, dom, cod, rhs) = self.parse_arrow_header(rest, line)?;
        let mut x = BTreeMap::new();
        let mut tail = rhs.trim();
        while !tail.is_empty() {
            let inner = tail
                .strip_prefix("cell")
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| err(line, format!("expected 'cell(a,b){{...}}', got '{tail}'")))?;
            let cells = parse_usize_list(inner.0, line)?;
            if cells.len() != 2 {
                return Err(err(line, "cell needs exactly two atom indices"));
            }
            let after = inner.1.trim_start();
            let (body, next) = after
                .strip_prefix('{')
                .and_then(|r| r.split_once('}'))
                .ok_or_else(|| err(line, "expected '{ ... }' after cell header"))?;
            let entries = parse_cell_entries(body, line)?;
            let g = GElement::new(cod.clone(), entries).map_err(|e| err(line, e.to_string()))?;
            x.insert(Cell::new(cells[0], cells[1]), g);
            tail = next.trim_start();
        }
        let gh = GHom::new(dom, cod, x).map_err(|e| err(line, e.to_string()))?;
        self.declare("ghom", &name, line)?;
        self.ghoms.insert(name, gh);
        Ok(())
    }

    fn parse_element(&mut self, rest: &str, line: usize) -> Result<(), ParseError> {
        let (name, tail) = rest
            .split_once(':')
            .ok_or_else(|| err(line, "expected 'element NAME : A = { ... }'"))?;
        let name = ident(name, line)?;
        let (alg, rhs) = tail
            .split_once('=')
            .ok_or_else(|| err(line, "expected '= { ... }'"))?;
        let alg_name = ident(alg, line)?;
        let ambient = self.algebra(&alg_name, line)?.clone();
        let body = rhs
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.trim_end().strip_suffix('}'))
            .ok_or_else(|| err(line, "expected '{ (a,b):m; ... }'"))?;
        let entries = parse_cell_entries(body, line)?;
        let g = GElement::new(ambient, entries).map_err(|e| err(line, e.to_string()))?;
        self.declare("element", &name, line)?;
        self.elements.insert(name, (alg_name, g));
        Ok(())
    }

    fn parse_system(&mut self, rest: &str, line: usize) -> Result<(), ParseError> {
        let (name, rhs) = rest
            .split_once('=')
            .ok_or_else(|| err(line, "expected 'system NAME = A -e-> B ...'"))?;
        let name = ident(name, line)?;
        // alternating algebra names and -embedding-> arrows
        let mut stage_names = Vec::new();
        let mut map_names = Vec::new();
        let mut tail = rhs.trim();
        loop {
            let end = tail.find(" -").unwrap_or(tail.len());
            stage_names.push(ident(&tail[..end], line)?);
            tail = tail[end..].trim_start();
            if tail.is_empty() {
                break;
            }
            let inner = tail
                .strip_prefix('-')
                .and_then(|r| r.split_once("->"))
                .ok_or_else(|| err(line, format!("expected '-NAME->', got '{tail}'")))?;
            map_names.push(ident(inner.0, line)?);
            tail = inner.1.trim_start();
            if tail.is_empty() {
                return Err(err(line, "arrow must be followed by a stage"));
            }
        }
        if stage_names.len() != map_names.len() + 1 {
            return Err(err(line, "system needs one more stage than arrows"));
        }
        let stages: Result<Vec<NestAlgebra>, ParseError> = stage_names
            .iter()
            .map(|n| self.algebra(n, line).cloned())
            .collect();
        let maps: Result<Vec<Embedding>, ParseError> = map_names
            .iter()
            .map(|n| {
                self.embeddings
                    .get(n)
                    .cloned()
                    .ok_or_else(|| err(line, format!("unknown embedding '{n}'")))
            })
            .collect();
        let system =
            DirectSystem::new(stages?, maps?).map_err(|e| err(line, e.to_string()))?;
        self.declare("system", &name, line)?;
        self.systems.insert(name, (stage_names, map_names, system));
        Ok(())
    }

    /// Prints the workspace back in the input grammar; reparsing the output
    /// reproduces the workspace.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for (kind, name) in &self.order {
            match kind.as_str() {
                "algebra" => {
                    let a = &self.algebras[name];
                    let ranks: Vec<String> =
                        a.atom_ranks().iter().map(u32::to_string).collect();
                    out.push_str(&format!("algebra {name} = nest({})\n", ranks.join(",")));
                }
                "embedding" => {
                    let phi = &self.embeddings[name];
                    let dom = self.name_of_algebra(phi.domain());
                    let cod = self.name_of_algebra(phi.codomain());
                    let summands: Vec<String> = phi
                        .summands()
                        .iter()
                        .map(|s| {
                            let atoms: Vec<String> =
                                s.atoms().iter().map(usize::to_string).collect();
                            format!("({})", atoms.join(","))
                        })
                        .collect();
                    out.push_str(&format!(
                        "embedding {name} : {dom} -> {cod} = summands{{ {} }}\n",
                        summands.join("; ")
                    ));
                }
                "ghom" => {
                    let g = &self.ghoms[name];
                    let dom = self.name_of_algebra(g.domain());
                    let cod = self.name_of_algebra(g.codomain());
                    let cells: Vec<String> = g
                        .images()
                        .iter()
                        .map(|(c, img)| {
                            let entries: Vec<String> = img
                                .entries()
                                .iter()
                                .map(|(cc, v)| format!("({},{}):{}", cc.row, cc.col, v))
                                .collect();
                            format!("cell({},{}){{ {} }}", c.row, c.col, entries.join("; "))
                        })
                        .collect();
                    out.push_str(&format!(
                        "ghom {name} : {dom} -> {cod} = {}\n",
                        cells.join(" ")
                    ));
                }
                "element" => {
                    let (alg, g) = &self.elements[name];
                    let entries: Vec<String> = g
                        .entries()
                        .iter()
                        .map(|(c, v)| format!("({},{}):{}", c.row, c.col, v))
                        .collect();
                    out.push_str(&format!(
                        "element {name} : {alg} = {{ {} }}\n",
                        entries.join("; ")
                    ));
                }
                "system" => {
                    let (stage_names, map_names, _) = &self.systems[name];
                    let mut chain = stage_names[0].clone();
                    for (m, s) in map_names.iter().zip(&stage_names[1..]) {
                        chain.push_str(&format!(" -{m}-> {s}"));
                    }
                    out.push_str(&format!("system {name} = {chain}\n"));
                }
                _ => unreachable!(),
            }
        }
        out
    }

    fn name_of_algebra(&self, a: &NestAlgebra) -> String {
        for (kind, name) in &self.order {
            if kind == "algebra" && &self.algebras[name] == a {
                return name.clone();
            }
        }
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two algebras and the first example embedding
algebra A = nest(2,2,2)
algebra B = nest(6,8,10)
embedding phi : A -> B = summands{ (1,1,2); (1,2,2); (2,3,3); (3,3,3) }
";

    #[test]
    fn parse_sample() {
        let ws = Workspace::parse(SAMPLE).unwrap();
        assert_eq!(ws.algebras.len(), 2);
        let phi = &ws.embeddings["phi"];
        assert_eq!(phi.multiplicity(), 4);
        assert_eq!(phi.summands(), nestlab_core::corpus::phi1().summands());
    }

    #[test]
    fn empty_input() {
        let ws = Workspace::parse("").unwrap();
        assert!(ws.algebras.is_empty());
    }

    #[test]
    fn monotonicity_violation_reported() {
        let bad = "algebra A = nest(1,1)\nembedding x : A -> A = summands{ (2,1) }\n";
        let e = Workspace::parse(bad).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("monotone"));
    }

    #[test]
    fn duplicate_and_unknown_names() {
        let dup = "algebra A = nest(1)\nalgebra A = nest(2)\n";
        assert!(Workspace::parse(dup).unwrap_err().message.contains("duplicate"));
        let unk = "embedding x : A -> A = summands{ (1) }\n";
        assert!(Workspace::parse(unk).unwrap_err().message.contains("unknown"));
    }

    #[test]
    fn multiline_and_multiplicity() {
        let input = "\
algebra A = nest(1,1)
algebra B = nest(3,3)
embedding phi : A -> B = summands{
  (1,1);
  (1,2);
  (2,2)
}
embedding psi : A -> B = summands{ (1,2) x3 }
";
        let ws = Workspace::parse(input).unwrap();
        assert_eq!(ws.embeddings["phi"].summands(), nestlab_core::corpus::phi5().summands());
        assert_eq!(ws.embeddings["psi"].multiplicity(), 3);
    }

    #[test]
    fn ghom_element_system_statements() {
        let input = "\
algebra A = nest(1,1)
algebra B = nest(1,2,1)
algebra C = nest(1,1,4,1,1)
embedding e1 : A -> B = summands{ (1,2); (2,3) }
embedding e2 : B -> C = summands{ (1,3,5); (2,3,4) }
ghom g : A -> B = cell(1,1){ (1,1):1; (2,2):1 } cell(1,2){ (1,2):1; (2,3):1 } cell(2,2){ (2,2):1; (3,3):1 }
element v : A = { (1,2):1 }
system S = A -e1-> B -e2-> C
";
        let ws = Workspace::parse(input).unwrap();
        assert_eq!(ws.ghoms["g"], ws.embeddings["e1"].g_map());
        assert_eq!(ws.elements["v"].1.get(&Cell::new(1, 2)), 1);
        assert_eq!(ws.systems["S"].2.num_stages(), 3);
    }

    #[test]
    fn print_reparse_round_trip() {
        let input = "\
algebra A = nest(1,1)
algebra B = nest(1,2,1)
algebra C = nest(1,1,4,1,1)
embedding e1 : A -> B = summands{ (1,2); (2,3) }
embedding e2 : B -> C = summands{ (1,3,5); (2,3,4) }
ghom g : A -> B = cell(1,1){ (1,1):1; (2,2):1 } cell(1,2){ (1,2):1; (2,3):1 } cell(2,2){ (2,2):1; (3,3):1 }
element v : A = { (1,2):1 }
system S = A -e1-> B -e2-> C
";
        let ws = Workspace::parse(input).unwrap();
        let printed = ws.print();
        let ws2 = Workspace::parse(&printed).unwrap();
        assert_eq!(ws, ws2);
        assert_eq!(printed, Workspace::parse(&printed).unwrap().print());
    }
}
