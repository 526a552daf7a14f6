//! The SSX text format for complexes, maps and cell certificates, and DOT
//! export of 1-skeleta.
//!
//! ```text
//! ssx 1
//! dim 0: a b
//! dim 1: f(b,a)     # faces in order d0, d1
//! marked: f
//! ```
//!
//! A map is written as its two complexes followed by the images of source
//! names; a certificate as its declared map followed by one `cell` line per
//! attachment, whose levels are simplex indices into the current stage.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::lifting::{Attachment, CellCertificate, CellGenerator};
use crate::sset::{SSet, SSetError, SSetMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("invalid complex: {0}")]
    Validation(#[from] SSetError),
}

fn err<T>(line: usize, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax { line, reason: reason.into() })
}

/// A complex together with the names of its simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named {
    pub sset: SSet,
    pub names: Vec<Vec<String>>,
}

impl Named {
    /// Canonical names: `v`, `e`, `t` and then `s{n}_` prefixes, by index.
    pub fn canonical(x: &SSet) -> Self {
        let names = (0..x.num_levels())
            .map(|n| (0..x.count(n)).map(|i| canonical_name(n, i)).collect())
            .collect();
        Named { sset: x.clone(), names }
    }

    fn lookup(&self) -> HashMap<&str, (usize, usize)> {
        let mut out = HashMap::new();
        for (n, level) in self.names.iter().enumerate() {
            for (i, name) in level.iter().enumerate() {
                out.insert(name.as_str(), (n, i));
            }
        }
        out
    }
}

fn canonical_name(n: usize, i: usize) -> String {
    match n {
        0 => format!("v{i}"),
        1 => format!("e{i}"),
        2 => format!("t{i}"),
        _ => format!("s{n}_{i}"),
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Non-blank lines with comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Splits `a b(c, d) e` into entries, keeping parenthesised groups whole.
fn entries(line: usize, s: &str) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '(' if depth == 0 => {
                depth = 1;
                cur.push(c);
            }
            '(' => return err(line, "nested parenthesis"),
            ')' if depth == 1 => {
                depth = 0;
                cur.push(c);
            }
            ')' => return err(line, "unbalanced parenthesis"),
            c if c.is_whitespace() => {
                if depth == 0 && !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return err(line, "unbalanced parenthesis");
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

pub fn parse_ssx(text: &str) -> Result<SSet, ParseError> {
    Ok(parse_ssx_named(text)?.sset)
}

pub fn parse_ssx_named(text: &str) -> Result<Named, ParseError> {
    parse_lines(&content_lines(text).collect::<Vec<_>>())
}

fn parse_lines(lines: &[(usize, &str)]) -> Result<Named, ParseError> {
    let mut it = lines.iter().copied();
    match it.next() {
        Some((_, "ssx 1")) => {}
        Some((line, _)) => return err(line, "expected header `ssx 1`"),
        None => return err(1, "empty document"),
    }
    let mut names: Vec<Vec<String>> = Vec::new();
    let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut index: HashMap<String, (usize, usize)> = HashMap::new();
    let mut marked = Vec::new();
    let mut seen_marked = false;
    for (line, l) in it {
        if seen_marked {
            return err(line, "content after the marked line");
        }
        if let Some(rest) = l.strip_prefix("marked:") {
            seen_marked = true;
            for name in rest.split_whitespace() {
                match index.get(name) {
                    Some(&(1, e)) => marked.push(e),
                    Some(_) => return err(line, format!("`{name}` is not an edge")),
                    None => return err(line, format!("undeclared name `{name}`")),
                }
            }
            continue;
        }
        let Some((head, rest)) = l.split_once(':') else {
            return err(line, "expected `dim N:` or `marked:`");
        };
        let n: usize = match head.strip_prefix("dim ").map(|d| d.trim().parse()) {
            Some(Ok(n)) => n,
            _ => return err(line, format!("bad dimension header `{head}`")),
        };
        if n != names.len() {
            return err(line, format!("expected dimension {}, found {n}", names.len()));
        }
        let mut level_names = Vec::new();
        let mut level_faces = Vec::new();
        for entry in entries(line, rest)? {
            let (name, fs) = match entry.split_once('(') {
                Some((name, args)) => {
                    let args = args.strip_suffix(')').ok_or(ParseError::Syntax { line, reason: format!("bad entry `{entry}`") })?;
                    let args: Vec<&str> = args.split(',').map(str::trim).collect();
                    (name, Some(args))
                }
                None => (entry.as_str(), None),
            };
            if !is_name(name) {
                return err(line, format!("bad name `{name}`"));
            }
            if index.contains_key(name) {
                return err(line, format!("duplicate name `{name}`"));
            }
            let face_ids = match (n, fs) {
                (0, None) => Vec::new(),
                (0, Some(_)) => return err(line, format!("vertex `{name}` has faces")),
                (_, None) => return err(line, format!("`{name}` needs {} faces", n + 1)),
                (_, Some(args)) => {
                    if args.len() != n + 1 {
                        return err(line, format!("`{name}` has {} faces, expected {}", args.len(), n + 1));
                    }
                    let mut ids = Vec::new();
                    for a in args {
                        match index.get(a) {
                            Some(&(d, i)) if d + 1 == n => ids.push(i),
                            Some(_) => return err(line, format!("face `{a}` of `{name}` has the wrong dimension")),
                            None => return err(line, format!("undeclared name `{a}`")),
                        }
                    }
                    ids
                }
            };
            index.insert(name.to_string(), (n, level_names.len()));
            level_names.push(name.to_string());
            level_faces.push(face_ids);
        }
        names.push(level_names);
        faces.push(level_faces);
    }
    let vertices = faces.first().map_or(0, Vec::len);
    let higher = faces.into_iter().skip(1).collect();
    let sset = SSet::from_faces(vertices, higher, marked)?;
    names.truncate(sset.num_levels());
    Ok(Named { sset, names })
}

pub fn print_ssx(x: &SSet) -> String {
    print_named(&Named::canonical(x))
}

pub fn print_named(x: &Named) -> String {
    let mut out = String::from("ssx 1\n");
    for n in 0..x.sset.num_levels() {
        write!(out, "dim {n}:").unwrap();
        for (i, name) in x.names[n].iter().enumerate() {
            if n == 0 {
                write!(out, " {name}").unwrap();
            } else {
                let fs: Vec<&str> = x.sset.faces(n, i).iter().map(|&f| x.names[n - 1][f].as_str()).collect();
                write!(out, " {name}({})", fs.join(",")).unwrap();
            }
        }
        out.push('\n');
    }
    if !x.sset.marked().is_empty() {
        out.push_str("marked:");
        for &e in x.sset.marked() {
            write!(out, " {}", x.names[1][e]).unwrap();
        }
        out.push('\n');
    }
    out
}

/// The 1-skeleton as a DOT digraph, edges drawn from `d₁` to `d₀`.
pub fn export_dot(x: &SSet) -> String {
    let mut out = String::from("digraph {\n");
    for v in 0..x.count(0) {
        writeln!(out, "  {v};").unwrap();
    }
    for e in 0..x.count(1) {
        let style = if x.is_marked(e) { " [style=bold]" } else { "" };
        writeln!(out, "  {} -> {}{style};", x.face(1, e, 1), x.face(1, e, 0)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// A map between named complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub source: Named,
    pub target: Named,
    pub map: SSetMap,
}

/// Header line number, header text and body lines.
type Section<'a> = (usize, &'a str, Vec<(usize, &'a str)>);

/// Splits lines into sections headed by one of `keys`.
fn sections<'a>(lines: &[(usize, &'a str)], keys: &[&str]) -> Vec<Section<'a>> {
    let mut out: Vec<Section<'a>> = Vec::new();
    for &(line, l) in lines {
        let word = l.split_whitespace().next().unwrap_or("");
        if keys.contains(&word) {
            out.push((line, l, Vec::new()));
        } else if let Some(last) = out.last_mut() {
            last.2.push((line, l));
        } else {
            out.push((line, "", vec![(line, l)]));
        }
    }
    out
}

pub fn parse_map(text: &str) -> Result<NamedMap, ParseError> {
    let lines: Vec<_> = content_lines(text).collect();
    match lines.first() {
        Some((_, "ssxmap 1")) => parse_map_body(&lines[1..], lines[0].0),
        Some(&(line, _)) => err(line, "expected header `ssxmap 1`"),
        None => err(1, "empty document"),
    }
}

fn parse_map_body(lines: &[(usize, &str)], header: usize) -> Result<NamedMap, ParseError> {
    let secs = sections(lines, &["source", "target", "images"]);
    let get = |key: &str| {
        secs.iter().find(|s| s.1 == key).ok_or(ParseError::Syntax { line: header, reason: format!("missing `{key}` section") })
    };
    let source = parse_lines(&get("source")?.2)?;
    let target = parse_lines(&get("target")?.2)?;
    let images = get("images")?;
    let src_names = source.lookup();
    let tgt_names = target.lookup();
    let mut levels: Vec<Vec<Option<usize>>> = (0..source.sset.num_levels()).map(|n| vec![None; source.sset.count(n)]).collect();
    for &(line, l) in &images.2 {
        for pair in l.split_whitespace() {
            let Some((a, b)) = pair.split_once("->") else {
                return err(line, format!("expected `name->name`, found `{pair}`"));
            };
            let Some(&(n, i)) = src_names.get(a) else { return err(line, format!("undeclared source name `{a}`")) };
            match tgt_names.get(b) {
                Some(&(m, j)) if m == n => levels[n][i] = Some(j),
                Some(_) => return err(line, format!("`{a}` and `{b}` differ in dimension")),
                None => return err(line, format!("undeclared target name `{b}`")),
            }
        }
    }
    let mut out = Vec::new();
    for (n, level) in levels.into_iter().enumerate() {
        let mut l = Vec::new();
        for (i, y) in level.into_iter().enumerate() {
            match y {
                Some(y) => l.push(y),
                None => return err(images.0, format!("no image for `{}`", source.names[n][i])),
            }
        }
        out.push(l);
    }
    let map = SSetMap::new(source.sset.clone(), target.sset.clone(), out)?;
    Ok(NamedMap { source, target, map })
}

pub fn print_map(f: &SSetMap) -> String {
    let mut out = String::from("ssxmap 1\n");
    write_map_body(&mut out, f);
    out
}

fn write_map_body(out: &mut String, f: &SSetMap) {
    let (s, t) = (Named::canonical(f.source()), Named::canonical(f.target()));
    out.push_str("source\n");
    out.push_str(&print_named(&s));
    out.push_str("target\n");
    out.push_str(&print_named(&t));
    out.push_str("images\n");
    for (n, level) in f.levels().iter().enumerate() {
        let pairs: Vec<String> = level.iter().enumerate().map(|(i, &j)| format!("{}->{}", s.names[n][i], t.names[n][j])).collect();
        if !pairs.is_empty() {
            out.push_str(&pairs.join(" "));
            out.push('\n');
        }
    }
}

/// A certificate with the map it claims to present.
pub fn print_certificate(c: &CellCertificate, f: &SSetMap) -> String {
    let mut out = String::from("ssxcert 1\n");
    write_map_body(&mut out, f);
    for a in &c.attachments {
        let levels: Vec<String> = a
            .attaching
            .levels()
            .iter()
            .map(|l| l.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        writeln!(out, "cell {}: {}", a.generator, levels.join(" | ")).unwrap();
    }
    out
}

fn parse_generator(line: usize, s: &str) -> Result<CellGenerator, ParseError> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let num = |i: usize| -> Result<usize, ParseError> {
        words.get(i).and_then(|w| w.parse().ok()).ok_or(ParseError::Syntax { line, reason: format!("bad generator `{s}`") })
    };
    let g = match words.first().copied() {
        Some("boundary") if words.len() == 2 => CellGenerator::Boundary(num(1)?),
        Some("horn") if words.len() == 3 => CellGenerator::Horn(num(1)?, num(2)?),
        Some("marked_horn") if words.len() == 3 => CellGenerator::MarkedHorn(num(1)?, num(2)?),
        Some("edge_marking") if words.len() == 1 => CellGenerator::EdgeMarking,
        Some("marking_saturation") if words.len() == 1 => CellGenerator::MarkingSaturation,
        _ => return err(line, format!("bad generator `{s}`")),
    };
    Ok(g)
}

/// Parses a certificate and its declared map. Attaching maps are checked
/// against the generator's domain here and against the stage on replay.
pub fn parse_certificate(text: &str) -> Result<(CellCertificate, SSetMap), ParseError> {
    let lines: Vec<_> = content_lines(text).collect();
    match lines.first() {
        Some((_, "ssxcert 1")) => {}
        Some(&(line, _)) => return err(line, "expected header `ssxcert 1`"),
        None => return err(1, "empty document"),
    }
    let split = lines.iter().position(|(_, l)| l.starts_with("cell ")).unwrap_or(lines.len());
    let map = parse_map_body(&lines[1..split], lines[0].0)?.map;
    let mut attachments = Vec::new();
    for &(line, l) in &lines[split..] {
        let Some(rest) = l.strip_prefix("cell ") else { return err(line, "expected `cell`") };
        let Some((gen, levels)) = rest.split_once(':') else { return err(line, "expected `cell GEN: levels`") };
        let generator = parse_generator(line, gen)?;
        let domain = generator.inclusion().map_err(|e| ParseError::Syntax { line, reason: e.to_string() })?.source().clone();
        let mut lv = Vec::new();
        for part in levels.split('|') {
            let mut l = Vec::new();
            for w in part.split_whitespace() {
                match w.parse() {
                    Ok(v) => l.push(v),
                    Err(_) => return err(line, format!("bad index `{w}`")),
                }
            }
            lv.push(l);
        }
        if lv.len() == 1 && lv[0].is_empty() {
            lv.clear();
        }
        if lv.len() != domain.num_levels() || lv.iter().enumerate().any(|(n, l)| l.len() != domain.count(n)) {
            return err(line, "attaching levels do not fit the generator");
        }
        let attaching = SSetMap::pending(domain, lv);
        attachments.push(Attachment { generator, attaching });
    }
    Ok((CellCertificate { source: map.source().clone(), attachments }, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{cospan_left_certificate, verify_certificate};
    use crate::sset::{boundary, simplex};
    use crate::Mode;

    #[test]
    fn parse_examples() {
        let l = parse_ssx("ssx 1\ndim 0: v\ndim 1: e(v,v)\nmarked: e\n").unwrap();
        assert_eq!(l.f_vector(), vec![1, 1]);
        assert!(l.is_marked(0));
        let d2 = "ssx 1\n# the 2-simplex\ndim 0: a b c\ndim 1: ab(b,a) ac(c,a) bc(c,b)\ndim 2: abc(bc, ac, ab)\n";
        let x = parse_ssx(d2).unwrap();
        assert_eq!(x.f_vector(), vec![3, 3, 1]);
        assert!(crate::search::find_isomorphism(&x, &simplex(2)).is_some());
        assert!(matches!(parse_ssx("ssx 1\ndim 0: a\ndim 1: e(a,b)\n"), Err(ParseError::Syntax { line: 3, .. })));
        assert!(matches!(parse_ssx("ssx 2\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_ssx("ssx 1\ndim 1: e(a,a)\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_ssx("ssx 1\ndim 0: a a\n"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_ssx("ssx 1\ndim 0: a\nmarked: a\n"), Err(ParseError::Syntax { .. })));
        let bad = "ssx 1\ndim 0: a b c\ndim 1: x(b,a) y(c,a) z(c,b)\ndim 2: t(x,y,z)\n";
        assert!(matches!(parse_ssx(bad), Err(ParseError::Validation(_))));
        assert_eq!(parse_ssx("ssx 1\n").unwrap(), SSet::empty());
    }

    #[test]
    fn print_round_trip() {
        for x in [simplex(3), crate::sset::dunce_hat(), simplex(1).fully_marked(), SSet::empty()] {
            let text = print_ssx(&x);
            assert_eq!(parse_ssx(&text).unwrap(), x);
            assert_eq!(print_ssx(&parse_ssx(&text).unwrap()), text);
        }
    }

    #[test]
    fn dot_examples() {
        assert_eq!(export_dot(&simplex(1)), "digraph {\n  0;\n  1;\n  0 -> 1;\n}\n");
        let l = crate::sset::loop_complex();
        assert!(export_dot(&l).contains("0 -> 0;"));
        assert!(export_dot(&l.fully_marked()).contains("[style=bold]"));
    }

    #[test]
    fn map_round_trip() {
        let f = boundary(2);
        let text = print_map(&f);
        assert_eq!(parse_map(&text).unwrap().map, f);
        let bad = text.replace("v2->v2", "v2->v1");
        assert!(parse_map(&bad).is_err());
    }

    #[test]
    fn certificate_round_trip() {
        let (c, f) = cospan_left_certificate(1, Mode::Marked).unwrap();
        let text = print_certificate(&c, &f);
        let (c2, f2) = parse_certificate(&text).unwrap();
        assert_eq!(f2, f);
        assert!(verify_certificate(&c2, &f2).unwrap());
        // An attaching map pointing past the stage fails on replay.
        let first = text.lines().find(|l| l.starts_with("cell ")).unwrap();
        assert!(first.starts_with("cell marked_horn 1 0: "));
        let (c3, f3) = parse_certificate(&text.replace(first, "cell marked_horn 1 0: 99")).unwrap();
        assert!(matches!(verify_certificate(&c3, &f3), Err(crate::lifting::LiftError::Replay(0, _))));
    }
}
