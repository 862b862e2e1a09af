//! On-disk cache of the four graph modules of a case.
//!
//! An artifact is a text file: a magic line, a `sha256 <hex>` line hashing
//! the body, then the body. The body lists, per graph, the tower moduli,
//! basis points with weights and every operator in the matrix text format.
//! A hash mismatch or unparsable body triggers a rebuild.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chargroup::galois::{FPoly, Fe, FieldTower};
use chargroup::shimura::CaseGraphs;
use chargroup::ssmod::{EdgePoint, GraphModule, VertexPoint};
use chargroup::{IntegerMatrix, Label};
use sha2::{Digest, Sha256};

use crate::exit::CliError;

const MAGIC: &str = "chargroup-cache 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Built,
    Cached,
    /// Rebuilt because the existing file could not be used.
    Rebuilt(String),
}

impl CacheStatus {
    pub fn describe(&self) -> String {
        match self {
            CacheStatus::Built => "built".into(),
            CacheStatus::Cached => "cached".into(),
            CacheStatus::Rebuilt(why) => format!("rebuilt ({why})"),
        }
    }
}

pub struct Artifact {
    pub path: PathBuf,
    pub hash: String,
    pub status: CacheStatus,
    pub graphs: CaseGraphs,
}

pub fn artifact_path(dir: &Path, p: u64, q: u64, ell: u64) -> PathBuf {
    dir.join(format!("case-p{p}-q{q}-ell{ell}.txt"))
}

fn sha256_hex(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

/// Loads the artifact for `(p, q, ell)` from `dir`, building and storing it when absent or unusable.
pub fn load_or_build(dir: &Path, p: u64, q: u64, ell: u64) -> Result<Artifact, CliError> {
    let path = artifact_path(dir, p, q, ell);
    let mut status = CacheStatus::Built;
    if path.exists() {
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(path.display(), e));
        match text.map(|t| read_artifact(&t)) {
            Ok(Ok((graphs, hash))) => return Ok(Artifact { path, hash, status: CacheStatus::Cached, graphs }),
            Ok(Err(why)) => status = CacheStatus::Rebuilt(why),
            Err(e) => return Err(e),
        }
    }
    let graphs = CaseGraphs::build(p, q, ell)?;
    let body = encode(&graphs);
    let hash = sha256_hex(&body);
    write_atomic(dir, &path, &format!("{MAGIC}\nsha256 {hash}\n{body}"))?;
    Ok(Artifact { path, hash, status, graphs })
}

fn write_atomic(dir: &Path, path: &Path, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating cache directory {}", dir.display()), e))?;
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| CliError::io(format!("writing {}", tmp.display()), e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(format!("renaming into {}", path.display()), e)
    })
}

/// Checks the header and hash, then decodes the body.
pub fn read_artifact(text: &str) -> Result<(CaseGraphs, String), String> {
    let mut parts = text.splitn(3, '\n');
    if parts.next() != Some(MAGIC) {
        return Err("unrecognized header".into());
    }
    let hash = parts.next().and_then(|l| l.strip_prefix("sha256 ")).ok_or("missing hash line")?;
    let body = parts.next().ok_or("missing body")?;
    if sha256_hex(body) != hash {
        return Err("hash mismatch".into());
    }
    Ok((decode(body)?, hash.to_string()))
}

fn fe_text(x: &Fe) -> String {
    x.0.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_fe(s: &str) -> Result<Fe, String> {
    s.split(',').map(|t| t.parse::<u64>().map_err(|e| format!("bad field element {s:?}: {e}"))).collect::<Result<_, _>>().map(Fe)
}

fn write_matrix(out: &mut String, name: &str, m: &IntegerMatrix) {
    let _ = writeln!(out, "{name}");
    out.push_str(&m.to_text());
}

fn encode_graph(out: &mut String, name: &str, g: &GraphModule) {
    let _ = writeln!(out, "graph {name}");
    let _ = writeln!(out, "p {}", g.p);
    let _ = writeln!(out, "q {}", g.q.map_or("-".to_string(), |q| q.to_string()));
    let _ = writeln!(out, "ell_max {}", g.ell_max);
    let _ = writeln!(out, "seed {}", g.tower.seed());
    for (k, m) in g.tower.moduli() {
        let coeffs: Vec<String> = m.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "modulus {k} {}", coeffs.join(" "));
    }
    let _ = writeln!(out, "vertices {}", g.vertices.len());
    for v in &g.vertices {
        let _ = writeln!(out, "{} {}", fe_text(&v.j), v.weight);
    }
    let _ = writeln!(out, "edges {}", g.edges.len());
    for e in &g.edges {
        let kernel: Vec<String> = e.kernel.0.iter().map(fe_text).collect();
        let _ = writeln!(out, "{} {} {}", fe_text(&e.j), e.weight, kernel.join(" "));
    }
    for (label, m) in &g.operators {
        write_matrix(out, &format!("operator {label}"), m);
    }
    for (name, m) in [("alpha", &g.alpha), ("beta", &g.beta), ("u_q", &g.u_q)] {
        if let Some(m) = m {
            write_matrix(out, name, m);
        }
    }
    out.push_str("end\n");
}

pub fn encode(g: &CaseGraphs) -> String {
    let mut out = String::new();
    for (name, graph) in [("pside", &g.pside), ("qside", &g.qside), ("vertex_p", &g.vertex_p), ("vertex_q", &g.vertex_q)] {
        encode_graph(&mut out, name, graph);
    }
    out
}

struct Lines<'a> {
    inner: std::str::Lines<'a>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, String> {
        self.inner.next().ok_or_else(|| "unexpected end of artifact".to_string())
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str, String> {
        let line = self.next()?;
        line.strip_prefix(key).and_then(|r| r.strip_prefix(' ')).ok_or_else(|| format!("expected {key:?}, found {line:?}"))
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, String> {
        let v = self.keyed(key)?;
        v.parse().map_err(|_| format!("bad {key} value {v:?}"))
    }

    fn matrix(&mut self) -> Result<IntegerMatrix, String> {
        IntegerMatrix::parse_lines(&mut self.inner).map_err(|e| e.to_string())
    }
}

fn decode_graph(lines: &mut Lines<'_>, name: &str) -> Result<GraphModule, String> {
    if lines.keyed("graph")? != name {
        return Err(format!("expected graph {name}"));
    }
    let p: u64 = lines.number("p")?;
    let q = match lines.keyed("q")? {
        "-" => None,
        s => Some(s.parse::<u64>().map_err(|_| format!("bad q {s:?}"))?),
    };
    let ell_max: u64 = lines.number("ell_max")?;
    let seed: u64 = lines.number("seed")?;
    let mut tower = FieldTower::new(p);
    tower.set_seed(seed);
    let mut line = lines.next()?;
    while let Some(rest) = line.strip_prefix("modulus ") {
        let nums: Vec<u64> = rest.split(' ').map(|t| t.parse().map_err(|_| format!("bad modulus {rest:?}"))).collect::<Result<_, _>>()?;
        let k = nums[0] as usize;
        let level = tower.build_level(k).map_err(|e| e.to_string())?;
        if level.modulus() != &nums[1..] {
            return Err(format!("modulus of degree {k} differs from the rebuilt tower"));
        }
        line = lines.next()?;
    }
    if tower.level(2).is_none() {
        return Err("quadratic level missing".into());
    }
    let nv: usize = line.strip_prefix("vertices ").and_then(|s| s.parse().ok()).ok_or("bad vertex count")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let l = lines.next()?;
        let (j, w) = l.split_once(' ').ok_or("bad vertex line")?;
        vertices.push(VertexPoint { j: parse_fe(j)?, weight: w.parse().map_err(|_| "bad weight")? });
    }
    let ne: usize = lines.number("edges")?;
    let mut edges = Vec::with_capacity(ne);
    for _ in 0..ne {
        let mut tokens = lines.next()?.split(' ');
        let j = parse_fe(tokens.next().ok_or("bad edge line")?)?;
        let weight = tokens.next().ok_or("bad edge line")?.parse().map_err(|_| "bad weight")?;
        let kernel = FPoly(tokens.map(parse_fe).collect::<Result<_, _>>()?);
        edges.push(EdgePoint { j, kernel, weight });
    }
    let mut operators = BTreeMap::new();
    let (mut alpha, mut beta, mut u_q) = (None, None, None);
    loop {
        let l = lines.next()?;
        match l {
            "end" => break,
            "alpha" => alpha = Some(lines.matrix()?),
            "beta" => beta = Some(lines.matrix()?),
            "u_q" => u_q = Some(lines.matrix()?),
            _ => {
                let label: Label = l.strip_prefix("operator ").ok_or_else(|| format!("unexpected line {l:?}"))?.parse().map_err(|e: chargroup::Error| e.to_string())?;
                operators.insert(label, lines.matrix()?);
            }
        }
    }
    Ok(GraphModule { p, q, ell_max, vertices, edges, operators, alpha, beta, u_q, tower })
}

pub fn decode(body: &str) -> Result<CaseGraphs, String> {
    let mut lines = Lines { inner: body.lines() };
    let pside = decode_graph(&mut lines, "pside")?;
    let qside = decode_graph(&mut lines, "qside")?;
    let vertex_p = decode_graph(&mut lines, "vertex_p")?;
    let vertex_q = decode_graph(&mut lines, "vertex_q")?;
    let size_ok = |g: &GraphModule| g.operators.values().all(|m| m.rows() == g.size() && m.cols() == g.size());
    if ![&pside, &qside, &vertex_p, &vertex_q].into_iter().all(size_ok) {
        return Err("operator sizes do not match the bases".into());
    }
    Ok(CaseGraphs { pside, qside, vertex_p, vertex_q })
}
