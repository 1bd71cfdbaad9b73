//! Bit-exact text formats for codes and designs, and the loaders behind the
//! design library. Loaders verify everything before returning it; a file
//! that parses but fails verification is a load error.
//!
//! Code files (`CCC 1`):
//! ```text
//! CCC 1
//! q n d w1 w2 ...
//! # comment
//! group p1 p2 ...
//! pos:sym pos:sym pos:sym
//! ```
//! One line per codeword with ascending `pos:sym` pairs. `group` lines, when
//! present, attach a group partition (a GDC); points not listed in any group
//! line form singleton groups.
//!
//! Design files (`GDD 1`):
//! ```text
//! GDD 1
//! points N
//! K k1 k2 ...
//! group p1 p2 ...
//! block p1 p2 ...
//! class b1 b2 ...      (optional resolution, block indices)
//! hole p1 p2 ...       (optional)
//! partial              (optional: prestructure, coverage <= 1)
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::codes::{
    verify_code, verify_design, verify_gdc, BlockDesign, Code, Codeword, Composition,
    CoverageMode, Gdc, GroupPartition, VerificationReport,
};
use crate::{Error, Result};

/// A parsed code file: either a plain code or a GDC when groups are present.
#[derive(Clone, Debug)]
pub enum CodePayload {
    Plain(Code),
    Grouped(Gdc),
}

impl CodePayload {
    pub fn len(&self) -> usize {
        match self {
            CodePayload::Plain(c) => c.len(),
            CodePayload::Grouped(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn code(&self) -> &Code {
        match self {
            CodePayload::Plain(c) => c,
            CodePayload::Grouped(g) => &g.code,
        }
    }

    pub fn verify(&self) -> VerificationReport {
        match self {
            CodePayload::Plain(c) => verify_code(c),
            CodePayload::Grouped(g) => verify_gdc(g),
        }
    }
}

/// Canonical text form: sorted codeword lines, groups first, comments kept
/// only when supplied. Emitting twice yields identical bytes.
pub fn emit_code(payload: &CodePayload, comments: &[String]) -> String {
    let (code, groups) = match payload {
        CodePayload::Plain(c) => (c, None),
        CodePayload::Grouped(g) => (&g.code, Some(g.partition.groups())),
    };
    let mut out = String::new();
    out.push_str("CCC 1\n");
    let q = code.comp.q();
    write!(out, "{} {} {}", q, code.n, code.d).unwrap();
    for w in code.comp.weights() {
        write!(out, " {w}").unwrap();
    }
    out.push('\n');
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    if let Some(groups) = groups {
        for g in groups {
            out.push_str("group");
            for p in g {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
        }
    }
    for w in code.canonical_words() {
        let mut first = true;
        for &(p, s) in w.support() {
            if !first {
                out.push(' ');
            }
            write!(out, "{p}:{s}").unwrap();
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Parse and verify a code file. Groups, when present, are completed with
/// singleton groups for unlisted points.
pub fn parse_code(text: &str) -> Result<CodePayload> {
    let mut lines = text.lines().enumerate();
    let (_, magic) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty file".into() })?;
    if magic.trim() != "CCC 1" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("bad magic '{magic}'"),
        });
    }
    let (hline, header) = lines.next().ok_or_else(|| Error::Parse {
        line: 2,
        msg: "missing header".into(),
    })?;
    let nums: Vec<u32> = header
        .split_whitespace()
        .map(|t| {
            t.parse::<u32>().map_err(|_| Error::Parse {
                line: hline + 1,
                msg: format!("bad integer '{t}'"),
            })
        })
        .collect::<Result<_>>()?;
    if nums.len() < 4 {
        return Err(Error::Parse {
            line: hline + 1,
            msg: "header needs q n d and composition".into(),
        });
    }
    let (q, n, d) = (nums[0], nums[1], nums[2]);
    let comp = Composition::new(nums[3..].to_vec()).map_err(|e| Error::Parse {
        line: hline + 1,
        msg: e.to_string(),
    })?;
    if comp.q() != q {
        return Err(Error::Parse {
            line: hline + 1,
            msg: format!("composition {comp} inconsistent with q={q}"),
        });
    }

    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut words: Vec<Codeword> = Vec::new();
    for (li, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("group") {
            let pts = parse_ints(rest, li + 1)?;
            groups.push(pts);
            continue;
        }
        let mut support = Vec::new();
        for tok in line.split_whitespace() {
            let (p, s) = tok.split_once(':').ok_or_else(|| Error::Parse {
                line: li + 1,
                msg: format!("bad pair '{tok}', expected pos:sym"),
            })?;
            let p: u32 = p.parse().map_err(|_| Error::Parse {
                line: li + 1,
                msg: format!("bad position '{p}'"),
            })?;
            let s: u8 = s.parse().map_err(|_| Error::Parse {
                line: li + 1,
                msg: format!("bad symbol '{s}'"),
            })?;
            support.push((p, s));
        }
        if support.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Parse {
                line: li + 1,
                msg: "positions must be ascending".into(),
            });
        }
        words.push(Codeword::new(n, support).map_err(|e| Error::Parse {
            line: li + 1,
            msg: e.to_string(),
        })?);
    }

    let code = Code::new(n, comp, d, words);
    let payload = if groups.is_empty() {
        CodePayload::Plain(code)
    } else {
        let mut covered = vec![false; n as usize];
        for g in &groups {
            for &p in g {
                if p >= n {
                    return Err(Error::invalid(format!("group point {p} out of range")));
                }
                covered[p as usize] = true;
            }
        }
        for p in 0..n {
            if !covered[p as usize] {
                groups.push(vec![p]);
            }
        }
        let partition = GroupPartition::new(n, groups)?;
        let d = code.d;
        CodePayload::Grouped(Gdc { partition, code, d })
    };
    payload.verify().into_result("code file")?;
    Ok(payload)
}

fn parse_ints(s: &str, line: usize) -> Result<Vec<u32>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u32>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad integer '{t}'"),
            })
        })
        .collect()
}

/// Canonical design emit: groups, blocks (sorted), classes, hole.
pub fn emit_design(design: &BlockDesign, partial: bool, comments: &[String]) -> String {
    let mut out = String::new();
    out.push_str("GDD 1\n");
    writeln!(out, "points {}", design.n()).unwrap();
    out.push('K');
    for k in &design.k {
        write!(out, " {k}").unwrap();
    }
    out.push('\n');
    if partial {
        out.push_str("partial\n");
    }
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    for g in design.partition.groups() {
        out.push_str("group");
        for p in g {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    // canonical block order, with a stable index map for the classes
    let mut order: Vec<usize> = (0..design.blocks.len()).collect();
    order.sort_by(|&a, &b| design.blocks[a].cmp(&design.blocks[b]));
    let mut new_index = vec![0usize; design.blocks.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    for &bi in &order {
        out.push_str("block");
        for p in &design.blocks[bi] {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    if let Some(classes) = &design.resolution {
        let mut canon: Vec<Vec<usize>> = classes
            .iter()
            .map(|class| {
                let mut idx: Vec<usize> = class.iter().map(|&b| new_index[b]).collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        canon.sort();
        for class in canon {
            out.push_str("class");
            for b in class {
                write!(out, " {b}").unwrap();
            }
            out.push('\n');
        }
    }
    if let Some(hole) = &design.hole {
        out.push_str("hole");
        let mut h = hole.clone();
        h.sort_unstable();
        for p in h {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parse a design file and verify it in the mode its markers imply
/// (`partial` line → prestructure, `hole` line → incomplete design,
/// otherwise exact GDD coverage).
pub fn parse_design(text: &str) -> Result<(BlockDesign, CoverageMode)> {
    let mut lines = text.lines().enumerate();
    let (_, magic) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty file".into() })?;
    if magic.trim() != "GDD 1" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("bad magic '{magic}'"),
        });
    }
    let mut n: Option<u32> = None;
    let mut k: BTreeSet<u32> = BTreeSet::new();
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut hole: Option<Vec<u32>> = None;
    let mut partial = false;

    for (li, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("points") {
            n = Some(rest.trim().parse().map_err(|_| Error::Parse {
                line: li + 1,
                msg: "bad point count".into(),
            })?);
        } else if line == "partial" {
            partial = true;
        } else if let Some(rest) = line.strip_prefix("K") {
            k = parse_ints(rest, li + 1)?.into_iter().collect();
        } else if let Some(rest) = line.strip_prefix("group") {
            groups.push(parse_ints(rest, li + 1)?);
        } else if let Some(rest) = line.strip_prefix("block") {
            blocks.push(parse_ints(rest, li + 1)?);
        } else if let Some(rest) = line.strip_prefix("class") {
            classes.push(
                parse_ints(rest, li + 1)?
                    .into_iter()
                    .map(|b| b as usize)
                    .collect(),
            );
        } else if let Some(rest) = line.strip_prefix("hole") {
            hole = Some(parse_ints(rest, li + 1)?);
        } else {
            return Err(Error::Parse {
                line: li + 1,
                msg: format!("unrecognized line '{line}'"),
            });
        }
    }

    let n = n.ok_or_else(|| Error::invalid("design file missing 'points'"))?;
    let partition = GroupPartition::new(n, groups)?;
    let mut design = BlockDesign::new(partition, blocks, k);
    if !classes.is_empty() {
        design.resolution = Some(classes);
    }
    design.hole = hole;

    let mode = if partial {
        CoverageMode::Partial
    } else if design.hole.is_some() {
        CoverageMode::Hole
    } else {
        CoverageMode::Exact
    };
    verify_design(&design, mode).into_result("design file")?;
    Ok((design, mode))
}

/// Write atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = dir.to_path_buf();
    tmp.push(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_gdc() -> Gdc {
        // the 2^3 GDC of distance 4: cyclic shifts of <1,5|0> on Z_6
        let comp = Composition::ternary21();
        let mut words = Vec::new();
        for i in 0..6u32 {
            words.push(Codeword::from_tuple(6, &[(1 + i) % 6, (5 + i) % 6, i], &comp).unwrap());
        }
        Gdc {
            partition: GroupPartition::new(6, vec![vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap(),
            code: Code::new(6, comp, 4, words),
            d: 4,
        }
    }

    #[test]
    fn code_roundtrip_is_identity() {
        let gdc = sample_gdc();
        let text = emit_code(&CodePayload::Grouped(gdc), &["sample".into()]);
        let parsed = parse_code(&text).unwrap();
        assert_eq!(parsed.len(), 6);
        let text2 = emit_code(&parsed, &["sample".into()]);
        assert_eq!(text, text2);
    }

    #[test]
    fn corrupt_code_fails_verification() {
        let gdc = sample_gdc();
        let mut text = emit_code(&CodePayload::Grouped(gdc), &[]);
        // duplicate the last word line
        let last = text.trim_end().rsplit('\n').next().unwrap().to_string();
        text.push_str(&last);
        text.push('\n');
        let err = parse_code(&text).unwrap_err();
        assert!(matches!(err, Error::VerificationFailed { .. }));
    }

    #[test]
    fn design_roundtrip_and_double_cover_rejection() {
        let part = GroupPartition::new(
            12,
            vec![(0..4).collect(), (4..8).collect(), (8..12).collect()],
        )
        .unwrap();
        let mut blocks = Vec::new();
        for r in 0..4u32 {
            for c in 0..4u32 {
                blocks.push(vec![r, 4 + c, 8 + (r + c) % 4]);
            }
        }
        let design = BlockDesign::new(part, blocks, [3].into_iter().collect());
        let text = emit_design(&design, false, &[]);
        let (parsed, mode) = parse_design(&text).unwrap();
        assert_eq!(mode, CoverageMode::Exact);
        assert_eq!(emit_design(&parsed, false, &[]), text);

        // repeat a block: pair covered twice -> load error naming the pair
        let mut corrupt = design.clone();
        corrupt.blocks.push(corrupt.blocks[0].clone());
        let text = emit_design(&corrupt, false, &[]);
        let err = parse_design(&text).unwrap_err();
        match err {
            Error::VerificationFailed { witness, .. } => {
                assert!(witness.contains("pair"), "witness: {witness}")
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn atomic_write_creates_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x/y.ccc");
        write_atomic(&path, "CCC 1\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "CCC 1\n");
    }
}
