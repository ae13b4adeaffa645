//! Instance files and the `cmo` command-line driver.
//!
//! Instance grammar (line oriented, `#` starts a comment, blank lines ignored):
//!
//! ```text
//! dim <d>
//! n <n>
//! <d numbers>                      # n weight lines, elements 1..n
//! matroid uniform <r>
//!   | matroid graphic <V>          # then n lines `u v`, vertices 0..V-1
//!   | matroid partition            # then n block ids (0-based), then one line of capacities
//!   | matroid linear <rows>        # then <rows> lines of n numbers
//! objective sqnorm
//!   | objective pnorm <p|inf>
//!   | objective balanced
//!   | objective maxlin <k>         # then k lines of d numbers
//! ```

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::applications::{solve_balanced_clustering, solve_quadratic_assignment, ClusterInstance, QaInstance};
use crate::chambers::{enumerate_chambers, ChamberStrategy};
use crate::error::Error;
use crate::geometry::{GeneratorSet, Instance, Vector};
use crate::matroid::{ConcreteMatroid, EnumerationLimits};
use crate::objective::ConvexObjective;
use crate::solver::{brute_force_solve, candidates, solve_with, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Relative tolerance for `verify`.
const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
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

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub matroid: ConcreteMatroid,
    pub objective: ConvexObjective,
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("");
                let toks: Vec<&str> = l.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        let last_line = text.lines().count().max(1);
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l.clone())
            }
            None => Err(ParseError {
                line: self.last_line,
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    fn remaining(&self) -> Option<usize> {
        self.lines.get(self.pos).map(|l| l.0)
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError {
            line,
            message: format!("invalid {what} '{tok}'"),
        })
}

fn parse_row(line: usize, toks: &[&str], expected: usize, what: &str) -> Result<Vec<f64>, ParseError> {
    if toks.len() != expected {
        return err(line, format!("{what}: expected {expected} numbers, found {}", toks.len()));
    }
    toks.iter()
        .map(|t| {
            let x: f64 = parse_num(line, t, "number")?;
            if x.is_finite() {
                Ok(x)
            } else {
                err(line, format!("non-finite number '{t}'"))
            }
        })
        .collect()
}

fn keyword_value(lines: &mut Lines<'_>, key: &str) -> Result<(usize, usize), ParseError> {
    let (ln, toks) = lines.next(key)?;
    match toks.as_slice() {
        [k, v] if *k == key => Ok((ln, parse_num(ln, v, key)?)),
        [k, ..] if *k == key => err(ln, format!("'{key}' takes exactly one value")),
        [k, ..] => err(ln, format!("unknown keyword '{k}', expected '{key}'")),
        [] => unreachable!(),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut lines = Lines::new(text);
    let (dim_line, dim) = keyword_value(&mut lines, "dim")?;
    if dim == 0 {
        return err(dim_line, "dimension must be at least 1");
    }
    let (_, n) = keyword_value(&mut lines, "n")?;
    let mut weights = Vec::with_capacity(n);
    for j in 0..n {
        let (ln, toks) = lines.next("a weight line")?;
        weights.push(Vector::new(parse_row(ln, &toks, dim, &format!("weight of element {}", j + 1))?));
    }
    let instance = Instance::new(dim, weights).map_err(|e| ParseError {
        line: dim_line,
        message: e.to_string(),
    })?;

    let matroid = parse_matroid(&mut lines, n)?;
    let objective = parse_objective(&mut lines, &instance)?;
    if let Some(ln) = lines.remaining() {
        return err(ln, "unexpected content after the objective");
    }
    Ok(InstanceFile {
        instance,
        matroid,
        objective,
    })
}

fn parse_matroid(lines: &mut Lines<'_>, n: usize) -> Result<ConcreteMatroid, ParseError> {
    let (ln, toks) = lines.next("a matroid line")?;
    if toks[0] != "matroid" {
        return err(ln, format!("unknown keyword '{}', expected 'matroid'", toks[0]));
    }
    let kind = toks.get(1).copied().unwrap_or("");
    let arity = |want: usize| -> Result<(), ParseError> {
        if toks.len() != want {
            return err(ln, format!("'matroid {kind}' expects {} argument(s)", want - 2));
        }
        Ok(())
    };
    let invalid = |e: Error| ParseError {
        line: ln,
        message: e.to_string(),
    };
    match kind {
        "uniform" => {
            arity(3)?;
            let r: usize = parse_num(ln, toks[2], "rank")?;
            if r > n {
                return err(ln, format!("uniform rank r = {r} must satisfy r <= n = {n}"));
            }
            ConcreteMatroid::uniform(n, r).map_err(invalid)
        }
        "graphic" => {
            arity(3)?;
            let vertices: usize = parse_num(ln, toks[2], "vertex count")?;
            let mut edges = Vec::with_capacity(n);
            for _ in 0..n {
                let (el, et) = lines.next("an edge line")?;
                if et.len() != 2 {
                    return err(el, format!("edge: expected 2 vertices, found {}", et.len()));
                }
                let u: usize = parse_num(el, et[0], "vertex")?;
                let v: usize = parse_num(el, et[1], "vertex")?;
                if u >= vertices || v >= vertices {
                    return err(el, format!("edge ({u}, {v}) references a vertex outside 0..{vertices}"));
                }
                edges.push((u, v));
            }
            ConcreteMatroid::graphic(vertices, edges).map_err(invalid)
        }
        "partition" => {
            arity(2)?;
            let mut blocks = Vec::with_capacity(n);
            while blocks.len() < n {
                let (bl, bt) = lines.next("block ids")?;
                if blocks.len() + bt.len() > n {
                    return err(bl, format!("too many block ids, expected {n}"));
                }
                for t in bt {
                    blocks.push(parse_num::<usize>(bl, t, "block id")?);
                }
            }
            let (cl, ct) = lines.next("a capacity line")?;
            let caps = ct
                .iter()
                .map(|t| parse_num::<usize>(cl, t, "capacity"))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&b) = blocks.iter().find(|&&b| b >= caps.len()) {
                return err(cl, format!("block {b} has no capacity ({} given)", caps.len()));
            }
            ConcreteMatroid::partition(blocks, caps).map_err(invalid)
        }
        "linear" => {
            arity(3)?;
            let rows: usize = parse_num(ln, toks[2], "row count")?;
            let mut data = Vec::with_capacity(rows);
            for r in 0..rows {
                let (rl, rt) = lines.next("a matrix row")?;
                data.push(parse_row(rl, &rt, n, &format!("matrix row {}", r + 1))?);
            }
            ConcreteMatroid::linear_from_rows(rows, data, n).map_err(invalid)
        }
        "" => err(ln, "missing matroid kind"),
        other => err(ln, format!("unknown matroid kind '{other}'")),
    }
}

fn parse_objective(lines: &mut Lines<'_>, inst: &Instance) -> Result<ConvexObjective, ParseError> {
    let (ln, toks) = lines.next("an objective line")?;
    if toks[0] != "objective" {
        return err(ln, format!("unknown keyword '{}', expected 'objective'", toks[0]));
    }
    let kind = toks.get(1).copied().unwrap_or("");
    let arity = |want: usize| -> Result<(), ParseError> {
        if toks.len() != want {
            return err(ln, format!("'objective {kind}' expects {} argument(s)", want - 2));
        }
        Ok(())
    };
    let invalid = |e: Error| ParseError {
        line: ln,
        message: e.to_string(),
    };
    match kind {
        "sqnorm" => {
            arity(2)?;
            Ok(ConvexObjective::SqNorm)
        }
        "balanced" => {
            arity(2)?;
            Ok(ConvexObjective::balanced(inst.total()))
        }
        "pnorm" => {
            arity(3)?;
            let p = if toks[2] == "inf" {
                f64::INFINITY
            } else {
                parse_num(ln, toks[2], "p")?
            };
            ConvexObjective::pnorm(p).map_err(invalid)
        }
        "maxlin" => {
            arity(3)?;
            let k: usize = parse_num(ln, toks[2], "row count")?;
            if k == 0 {
                return err(ln, "maxlin needs at least one row");
            }
            let mut rows = Vec::with_capacity(k);
            for r in 0..k {
                let (rl, rt) = lines.next("an objective row")?;
                rows.push(Vector::new(parse_row(rl, &rt, inst.dim(), &format!("objective row {}", r + 1))?));
            }
            ConvexObjective::max_lin(rows).map_err(invalid)
        }
        "" => err(ln, "missing objective kind"),
        other => err(ln, format!("unknown objective kind '{other}'")),
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes an instance in the file grammar. Numbers use the shortest representation
/// that parses back to the same value.
pub fn serialize_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let n = inst.n();
    let mut s = String::new();
    let _ = writeln!(s, "dim {}", inst.dim());
    let _ = writeln!(s, "n {n}");
    for w in inst.weights() {
        let _ = writeln!(s, "{w}");
    }
    match &file.matroid {
        ConcreteMatroid::Uniform { rank, .. } => {
            let _ = writeln!(s, "matroid uniform {rank}");
        }
        ConcreteMatroid::Graphic { vertices, edges } => {
            let _ = writeln!(s, "matroid graphic {vertices}");
            for (u, v) in edges {
                let _ = writeln!(s, "{u} {v}");
            }
        }
        ConcreteMatroid::Partition {
            block_of,
            capacities,
        } => {
            let _ = writeln!(s, "matroid partition");
            let _ = writeln!(s, "{}", join(block_of));
            let _ = writeln!(s, "{}", join(capacities));
        }
        ConcreteMatroid::Linear { rows, matrix, .. } => {
            let _ = writeln!(s, "matroid linear {rows}");
            for r in 0..*rows {
                let _ = writeln!(s, "{}", join(&matrix[r * n..(r + 1) * n]));
            }
        }
    }
    match &file.objective {
        ConvexObjective::SqNorm => {
            let _ = writeln!(s, "objective sqnorm");
        }
        ConvexObjective::PNorm(p) if p.is_infinite() => {
            let _ = writeln!(s, "objective pnorm inf");
        }
        ConvexObjective::PNorm(p) => {
            let _ = writeln!(s, "objective pnorm {p}");
        }
        ConvexObjective::Balanced(_) => {
            let _ = writeln!(s, "objective balanced");
        }
        ConvexObjective::MaxLin(rows) => {
            let _ = writeln!(s, "objective maxlin {}", rows.len());
            for r in rows {
                let _ = writeln!(s, "{r}");
            }
        }
    }
    s
}

/// Points file: one point per line, all with the same number of coordinates.
pub fn parse_points(text: &str) -> Result<Vec<Vector>, ParseError> {
    let lines = Lines::new(text);
    let mut dim = None;
    let mut points = Vec::new();
    for (ln, toks) in lines.lines {
        let d = *dim.get_or_insert(toks.len());
        points.push(Vector::new(parse_row(ln, &toks, d, "point")?));
    }
    Ok(points)
}

/// Matrix file: the rows of `W`, one per line.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, ParseError> {
    Ok(parse_points(text)?.into_iter().map(Vector::into_inner).collect())
}

#[derive(Debug, Parser)]
#[command(name = "cmo", about = "Convex maximization over matroid bases", version)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for reproducibility scripts; the solver is deterministic.
    #[arg(long, global = true, value_name = "K")]
    seed: Option<u64>,
    /// Cap on the number of subsets examined by exhaustive enumeration.
    #[arg(long = "max-enum", global = true, value_name = "K")]
    max_enum: Option<u128>,
    /// Worker threads for the per-chamber loop.
    #[arg(long, global = true, value_name = "K", default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance with the chamber-greedy algorithm.
    Solve { file: PathBuf },
    /// Solve and compare against exhaustive enumeration of all bases.
    Verify { file: PathBuf },
    /// Dump the chambers of the generator arrangement.
    Chambers {
        file: PathBuf,
        /// Emit CSV of the candidate points instead.
        #[arg(long)]
        points: bool,
    },
    /// Balanced two-way clustering of a points file.
    Cluster { file: PathBuf },
    /// Positive semidefinite quadratic assignment for a matrix file.
    Qassign { file: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded(_) => Failure::Limit(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path) -> impl Fn(ParseError) -> Failure + '_ {
    move |e| Failure::Usage(format!("{}: {e}", path.display()))
}

fn one_based(elements: &[usize]) -> String {
    join(elements.iter().map(|j| j + 1))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Limit(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_LIMIT
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let opts = SolveOptions {
        threads: cli.threads,
        ..SolveOptions::default()
    };
    let mut limits = EnumerationLimits::default();
    if let Some(k) = cli.max_enum {
        limits.max_subsets = k;
    }
    match &cli.command {
        Command::Solve { file } => {
            let f = parse_instance(&read(file)?).map_err(with_path(file))?;
            let sol = solve_with(&f.instance, &f.matroid, &f.objective, &opts)?;
            if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&sol).expect("serializable"))?;
            } else {
                writeln!(out, "basis: {}", one_based(&sol.best.basis))?;
                writeln!(out, "point: {}", sol.best.point)?;
                writeln!(out, "value: {}", sol.best.value)?;
                writeln!(out, "chambers: {}", sol.chambers)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { file } => {
            let f = parse_instance(&read(file)?).map_err(with_path(file))?;
            let sol = solve_with(&f.instance, &f.matroid, &f.objective, &opts)?;
            let bf = brute_force_solve(&f.instance, &f.matroid, &f.objective, limits)?;
            let (a, b) = (sol.best.value, bf.best.value);
            let matched = (a - b).abs() <= VERIFY_TOL * a.abs().max(b.abs()).max(1.0);
            if cli.json {
                let v = json!({ "solve": sol, "brute_force": bf, "match": matched });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
            } else {
                writeln!(out, "solve: value {} basis {}", a, one_based(&sol.best.basis))?;
                writeln!(out, "brute force: value {} basis {}", b, one_based(&bf.best.basis))?;
                writeln!(out, "bases enumerated: {}", bf.candidates_examined)?;
                writeln!(out, "match: {}", if matched { "yes" } else { "no" })?;
            }
            Ok(if matched { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Chambers { file, points } => {
            let f = parse_instance(&read(file)?).map_err(with_path(file))?;
            if *points {
                let (cands, _) = candidates(&f.instance, &f.matroid, &f.objective, &opts)?;
                let d = f.instance.dim();
                let header: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
                writeln!(out, "chamber,{},value", header.join(","))?;
                for (i, c) in cands.iter().enumerate() {
                    let coords: Vec<String> = c.point.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "{},{},{}", i + 1, coords.join(","), c.value)?;
                }
                return Ok(EXIT_OK);
            }
            let gens = GeneratorSet::build(&f.instance);
            let chambers = enumerate_chambers(&gens, ChamberStrategy::Auto)?;
            if cli.json {
                let list: Vec<_> = chambers
                    .iter()
                    .map(|c| json!({ "signs": c.signs.to_string(), "witness": c.witness }))
                    .collect();
                let v = json!({
                    "chambers": chambers.len(),
                    "normals": gens.normals,
                    "list": list,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
            } else {
                writeln!(out, "chambers: {}", chambers.len())?;
                writeln!(out, "normals: {}", gens.m_prime())?;
                for h in &gens.normals {
                    writeln!(out, "normal: {h}")?;
                }
                for c in &chambers {
                    writeln!(out, "signs: {} witness: {}", c.signs, c.witness)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Cluster { file } => {
            let points = parse_points(&read(file)?).map_err(with_path(file))?;
            let ci = ClusterInstance::new(points)?;
            let s = solve_balanced_clustering(&ci, &opts)?;
            if cli.json {
                let v = json!({
                    "first": s.first.iter().map(|j| j + 1).collect::<Vec<_>>(),
                    "second": s.second.iter().map(|j| j + 1).collect::<Vec<_>>(),
                    "variance_sum": s.variance_sum,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
            } else {
                writeln!(out, "cluster 1: {}", one_based(&s.first))?;
                writeln!(out, "cluster 2: {}", one_based(&s.second))?;
                writeln!(out, "variance_sum: {}", s.variance_sum)?;
            }
            Ok(EXIT_OK)
        }
        Command::Qassign { file } => {
            let rows = parse_matrix(&read(file)?).map_err(with_path(file))?;
            let qa = QaInstance::from_rows(&rows)?;
            let s = solve_quadratic_assignment(&qa, &opts)?;
            if cli.json {
                let v = json!({ "x": s.x, "value": s.value });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
            } else {
                writeln!(out, "x: {}", join(&s.x))?;
                writeln!(out, "value: {}", s.value)?;
            }
            Ok(EXIT_OK)
        }
    }
}
