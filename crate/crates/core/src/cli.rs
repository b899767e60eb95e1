//! Command-line front end. `run` is the whole program; the binary only wires
//! it to the process streams.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::combinat::{
    is_log_concave, k_parking_number, multinomial, rational_catalan, weak_compositions, BigCount,
};
use crate::graph::{
    caracol_k, complete_graph, multicaracol, pitman_stanley, DirectedMultigraph, Family,
};
use crate::gravity::{self, GravityDiagram};
use crate::kostant::kostant;
use crate::lidskii::{
    self, lattice_points_binomial, lattice_points_multiset, ones_flow, unit_flow,
};
use crate::paths::{self, enumerate_multilabeled, rational_shape};
use crate::unified::{self, UnifiedMode};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse {what} '{input}' at position {position}: {message}")]
    Parse {
        what: &'static str,
        input: String,
        position: usize,
        message: String,
    },
    #[error("method '{0}' is not available for this graph and net flow")]
    MethodUnavailable(String),
    #[error("output would have {estimate} items, above the cap of {cap} (raise --cap)")]
    TooLarge { estimate: BigCount, cap: u64 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "caracol",
    version,
    about = "Flow polytopes of caracol graphs: volumes, diagrams and parking triangles"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write output to FILE instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Refuse to enumerate more than N objects
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lidskii,
    Unified,
    Closed,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Bijections,
    Lidskii,
    Simplex,
    Orbits,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Render {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Caracol,
    Mcar,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalized volume of a flow polytope
    Volume {
        /// caracol:n=..,k=.. | mcar:a=..,k=.. | ps:n=.. | complete:n=.. | edges:[(1,2),...]
        #[arg(long)]
        graph: String,
        /// unit | ones | xy:x=..,y=.. | custom:[..]
        #[arg(long, default_value = "unit")]
        netflow: String,
        #[arg(long, value_enum, default_value_t = Method::Lidskii)]
        method: Method,
    },
    /// Kostant partition function K_G(v)
    Kostant {
        #[arg(long)]
        graph: String,
        /// vout | vin | unit | ones | xy:.. | custom:[..]
        #[arg(long, default_value = "vout")]
        vector: String,
    },
    /// Number tables
    Tables {
        #[command(subcommand)]
        table: Table,
    },
    /// Run invariant checks
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// Total for the simplex suite
        #[arg(long = "N")]
        total: Option<u64>,
    },
    /// List combinatorial objects
    Enumerate {
        #[arg(long, value_enum, global = true, default_value_t = Render::Text)]
        render: Render,
        #[command(subcommand)]
        object: Object,
    },
}

#[derive(Debug, Subcommand)]
enum Table {
    /// The k-parking triangle T_k(r, i)
    Parking {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 5)]
        rmax: u64,
    },
    /// Gravity diagram counts against rational Catalan numbers
    GravityCounts {
        #[arg(long, value_enum, default_value_t = FamilyArg::Caracol)]
        family: FamilyArg,
        #[arg(long, default_value_t = 7)]
        nmax: u64,
        /// Largest k for the multicaracol table
        #[arg(long, default_value_t = 3)]
        kmax: u64,
    },
}

#[derive(Debug, Subcommand)]
enum Object {
    Gravity {
        #[arg(long, value_enum, default_value_t = Kind::Out)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = FamilyArg::Caracol)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        k: u64,
    },
    Dyck {
        /// Reference composition, e.g. 1,1,0
        #[arg(long, conflicts_with_all = ["a", "b"])]
        t: Option<String>,
        #[arg(long, requires = "b")]
        a: Option<u64>,
        #[arg(long, requires = "a")]
        b: Option<u64>,
    },
    Unified {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "unit")]
        netflow: String,
    },
    Truncated {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        i: u64,
    },
    Multilabeled {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        i: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

/// Everything a command computed, in emission order.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub wall_time_ms: u128,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..Default::default()
        }
    }

    fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.insert(k.to_string(), v.to_string());
    }

    fn result(&mut self, k: impl ToString, v: impl ToString) {
        self.results.push((k.to_string(), v.to_string()));
    }

    fn check(&mut self, name: impl ToString, expected: impl ToString, got: impl ToString) -> bool {
        let (expected, got) = (expected.to_string(), got.to_string());
        let pass = expected == got;
        self.checks.push(Check {
            name: name.to_string(),
            expected,
            got,
            pass,
        });
        pass
    }

    fn check_true(&mut self, name: impl ToString, ok: bool) -> bool {
        self.check(name, true, ok)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn write_text(&self, out: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.results {
            writeln!(out, "{k}: {v}")?;
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{tag} {} (expected {}, got {})",
                c.name, c.expected, c.got
            )?;
        }
        Ok(())
    }
}

fn parse_err(
    what: &'static str,
    input: &str,
    position: usize,
    message: impl Into<String>,
) -> CliError {
    CliError::Parse {
        what,
        input: input.to_string(),
        position,
        message: message.into(),
    }
}

/// `key=value,key=value` with unsigned values, starting at byte `base`.
fn parse_params(
    what: &'static str,
    full: &str,
    base: usize,
) -> Result<BTreeMap<String, u64>, CliError> {
    let mut out = BTreeMap::new();
    let body = &full[base..];
    let mut at = base;
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| parse_err(what, full, at, "expected key=value"))?;
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| parse_err(what, full, at + k.len() + 1, "expected an unsigned integer"))?;
        out.insert(k.trim().to_string(), v);
        at += part.len() + 1;
    }
    Ok(out)
}

fn take(
    what: &'static str,
    full: &str,
    params: &BTreeMap<String, u64>,
    key: &str,
) -> Result<u64, CliError> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| parse_err(what, full, full.len(), format!("missing parameter {key}")))
}

fn parse_int_list(what: &'static str, full: &str, base: usize) -> Result<Vec<i64>, CliError> {
    let body = full[base..].trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(what, full, base, "expected [..]"))?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    let mut at = base + 1;
    let mut out = Vec::new();
    for part in inner.split(',') {
        out.push(
            part.trim()
                .parse()
                .map_err(|_| parse_err(what, full, at, "expected an integer"))?,
        );
        at += part.len() + 1;
    }
    Ok(out)
}

/// Parses a graph spec such as `caracol:n=7,k=2` or `edges:[(1,2),(2,3)]`.
pub fn parse_graph(spec: &str) -> Result<DirectedMultigraph, CliError> {
    const W: &str = "graph";
    let colon = spec
        .find(':')
        .ok_or_else(|| parse_err(W, spec, 0, "expected family:parameters"))?;
    let name = &spec[..colon];
    if name == "edges" {
        let body = spec[colon + 1..].trim();
        let inner = body
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| parse_err(W, spec, colon + 1, "expected [(i,j),...]"))?;
        let mut edges = Vec::new();
        let mut rest = inner;
        let mut at = colon + 2;
        while let Some(open) = rest.find('(') {
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| parse_err(W, spec, at + open, "unclosed '('"))?
                + open;
            let pair = &rest[open + 1..close];
            let (i, j) = pair
                .split_once(',')
                .ok_or_else(|| parse_err(W, spec, at + open, "expected (i,j)"))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| parse_err(W, spec, at + open + 1, "bad vertex"))?;
            let j: usize = j
                .trim()
                .parse()
                .map_err(|_| parse_err(W, spec, at + open + 1, "bad vertex"))?;
            edges.push((i, j));
            at += close + 1;
            rest = &rest[close + 1..];
        }
        let nv = edges
            .iter()
            .map(|&(i, j)| i.max(j))
            .max()
            .ok_or_else(|| parse_err(W, spec, colon + 1, "no edges"))?;
        return DirectedMultigraph::from_edge_list(nv.saturating_sub(1), &edges).map_err(invalid);
    }
    let p = parse_params(W, spec, colon + 1)?;
    let g = match name {
        "caracol" => caracol_k(
            take(W, spec, &p, "n")? as usize,
            p.get("k").copied().unwrap_or(1) as usize,
        ),
        "mcar" => multicaracol(
            take(W, spec, &p, "a")? as usize,
            take(W, spec, &p, "k")? as usize,
        ),
        "ps" => pitman_stanley(take(W, spec, &p, "n")? as usize),
        "complete" => complete_graph(take(W, spec, &p, "n")? as usize),
        _ => return Err(parse_err(W, spec, 0, format!("unknown family '{name}'"))),
    };
    g.map_err(invalid)
}

/// Net flow from a spec: unit, ones, xy:x=..,y=.., custom:[..]; also vout and
/// vin when `allow_vectors` is set.
pub fn parse_netflow(
    g: &DirectedMultigraph,
    spec: &str,
    allow_vectors: bool,
) -> Result<Vec<i64>, CliError> {
    const W: &str = "net flow";
    let (name, colon) = match spec.find(':') {
        Some(c) => (&spec[..c], c),
        None => (spec, spec.len()),
    };
    let a = match name {
        "unit" => unit_flow(g),
        "ones" => ones_flow(g),
        "vout" if allow_vectors => g.v_out(),
        "vin" if allow_vectors => g.v_in(),
        "xy" => {
            if colon == spec.len() {
                return Err(parse_err(W, spec, colon, "expected xy:x=..,y=.."));
            }
            let p = parse_params(W, spec, colon + 1)?;
            let (x, y) = (take(W, spec, &p, "x")?, take(W, spec, &p, "y")?);
            match g.family() {
                Family::Caracol { n, k } => unified::caracol_netflow(n, k, x, y),
                Family::Mcar { a, k } => unified::mcar_netflow(a, k, x, y),
                _ => {
                    return Err(parse_err(
                        W,
                        spec,
                        0,
                        "xy needs a caracol or multicaracol graph",
                    ))
                }
            }
        }
        "custom" => {
            if colon == spec.len() {
                return Err(parse_err(W, spec, colon, "expected custom:[..]"));
            }
            parse_int_list(W, spec, colon + 1)?
        }
        _ => return Err(parse_err(W, spec, 0, format!("unknown net flow '{name}'"))),
    };
    if a.len() != g.num_vertices() {
        return Err(parse_err(
            W,
            spec,
            0,
            format!("need {} entries, got {}", g.num_vertices(), a.len()),
        ));
    }
    Ok(a)
}

/// Closed form for the net flow if it has the (x^k, y^{n-k}, .) shape.
fn closed_form(g: &DirectedMultigraph, a: &[i64]) -> Option<BigCount> {
    let n = g.n();
    match g.family() {
        Family::Caracol { n: nn, k } => {
            let (x, y) = (a[0], a[k as usize]);
            let fits =
                a[..k as usize].iter().all(|&v| v == x) && a[k as usize..n].iter().all(|&v| v == y);
            (fits && x >= 0 && y >= 0)
                .then(|| unified::volume_closed_form(nn, k, x as u64, y as u64).ok())
                .flatten()
        }
        Family::Mcar { a: aa, k } => {
            let y = a[1];
            let fits = a[0] % k as i64 == 0 && a[1..n].iter().all(|&v| v == y);
            let x = a[0] / k as i64;
            (fits && x >= 0 && y >= 0)
                .then(|| unified::volume_closed_form_mcar(aa, k, x as u64, y as u64).ok())
                .flatten()
        }
        _ => None,
    }
}

fn fmt_vec<T: ToString>(v: &[T]) -> String {
    format!(
        "({})",
        v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
    )
}

fn cmd_volume(graph: &str, netflow: &str, method: Method, cap: u64) -> Result<RunReport, CliError> {
    let g = parse_graph(graph)?;
    let a = parse_netflow(&g, netflow, false)?;
    let mut rep = RunReport::new("volume");
    rep.input("graph", graph);
    rep.input("netflow", fmt_vec(&a));
    let lid = lidskii::volume(&g, &a).map_err(invalid)?;
    let closed = closed_form(&g, &a);
    let unified_value = |rep: &mut RunReport| -> Result<BigCount, CliError> {
        let mode = if lid <= BigCount::from(cap) {
            UnifiedMode::Iterate
        } else {
            UnifiedMode::Count
        };
        rep.input("unified_mode", format!("{mode:?}").to_lowercase());
        unified::enumerate_unified(&g, &a, mode).map_err(invalid)
    };
    match method {
        Method::Lidskii => rep.result("volume", &lid),
        Method::Closed => rep.result(
            "volume",
            closed.ok_or_else(|| CliError::MethodUnavailable("closed".into()))?,
        ),
        Method::Unified => {
            let u = unified_value(&mut rep)?;
            rep.result("volume", u);
        }
        Method::All => {
            rep.result("volume", &lid);
            let u = unified_value(&mut rep)?;
            rep.check("unified agrees with lidskii", &lid, u);
            match closed {
                Some(c) => {
                    rep.check("closed form agrees with lidskii", &lid, c);
                }
                None => rep.result("closed", "unavailable"),
            }
        }
    }
    Ok(rep)
}

fn cmd_kostant(graph: &str, vector: &str) -> Result<RunReport, CliError> {
    let g = parse_graph(graph)?;
    let v = parse_netflow(&g, vector, true)?;
    let mut rep = RunReport::new("kostant");
    rep.input("graph", graph);
    rep.input("vector", fmt_vec(&v));
    rep.result("kostant", kostant(&g, &v).map_err(invalid)?);
    Ok(rep)
}

fn json_count(c: &BigCount) -> serde_json::Value {
    match c.to_u64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

fn write_grid(
    out: &mut dyn Write,
    format: Format,
    corner: &str,
    header: &[String],
    rows: &[(String, Vec<String>)],
) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{corner},{}", header.join(","))?;
            for (label, row) in rows {
                writeln!(out, "{label},{}", row.join(","))?;
            }
        }
        _ => {
            let width = rows
                .iter()
                .flat_map(|(_, r)| r.iter())
                .chain(header)
                .map(String::len)
                .max()
                .unwrap_or(1);
            let lw = rows
                .iter()
                .map(|(l, _)| l.len())
                .chain([corner.len()])
                .max()
                .unwrap_or(1);
            let line = |label: &str, cells: &[String]| {
                let mut s = format!("{label:<lw$}");
                for c in cells {
                    s.push_str(&format!(" {c:>width$}"));
                }
                s.trim_end().to_string()
            };
            writeln!(out, "{}", line(corner, header))?;
            for (label, row) in rows {
                writeln!(out, "{}", line(label, row))?;
            }
        }
    }
    Ok(())
}

fn cmd_parking(
    k: u64,
    rmax: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<RunReport, CliError> {
    if k == 0 {
        return Err(CliError::Invalid("k must be at least 1".into()));
    }
    let mut rep = RunReport::new("tables parking");
    rep.input("k", k);
    rep.input("rmax", rmax);
    let table: Vec<Vec<BigCount>> = (0..=rmax)
        .map(|r| (0..=r).map(|i| k_parking_number(k, r, i)).collect())
        .collect();
    for (r, row) in table.iter().enumerate() {
        rep.check_true(format!("row r={r} log-concave"), is_log_concave(row));
    }
    if format == Format::Json {
        let rows: Vec<Vec<serde_json::Value>> = table
            .iter()
            .map(|r| r.iter().map(json_count).collect())
            .collect();
        let doc = serde_json::json!({ "k": k, "rows": rows });
        writeln!(
            out,
            "{}",
            serde_json::to_string(&doc).expect("serializable")
        )?;
    } else {
        let header: Vec<String> = (0..=rmax).map(|i| i.to_string()).collect();
        let rows: Vec<(String, Vec<String>)> = table
            .iter()
            .enumerate()
            .map(|(r, row)| (r.to_string(), row.iter().map(|c| c.to_string()).collect()))
            .collect();
        write_grid(out, format, "r\\i", &header, &rows)?;
    }
    Ok(rep)
}

fn cmd_gravity_counts(
    family: FamilyArg,
    nmax: u64,
    kmax: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<RunReport, CliError> {
    let mut rep = RunReport::new("tables gravity-counts");
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    match family {
        FamilyArg::Caracol => {
            rep.input("family", "caracol");
            rep.input("nmax", nmax);
            for n in 2..=nmax {
                let mut row = Vec::new();
                for k in 1..n {
                    let ins = gravity::enumerate_in_gravity(n, k)
                        .map_err(invalid)?
                        .count();
                    let outs = gravity::enumerate_out_gravity(n, k)
                        .map_err(invalid)?
                        .count();
                    let cat = rational_catalan(n - k, k * (n - k) - 1).map_err(invalid)?;
                    rep.check(format!("in-degree n={n} k={k}"), &cat, ins);
                    rep.check(format!("out-degree n={n} k={k}"), &cat, outs);
                    row.push(outs.to_string());
                    json_rows.push(serde_json::json!({"n": n, "k": k, "in": ins, "out": outs, "catalan": json_count(&cat)}));
                }
                rows.push((n.to_string(), row));
            }
            if format == Format::Json {
                writeln!(out, "{}", serde_json::Value::Array(json_rows))?;
            } else {
                let header: Vec<String> = (1..nmax).map(|k| k.to_string()).collect();
                write_grid(out, format, "n\\k", &header, &rows)?;
            }
        }
        FamilyArg::Mcar => {
            rep.input("family", "mcar");
            rep.input("amax", nmax);
            rep.input("kmax", kmax);
            for a in 1..=nmax {
                let mut row = Vec::new();
                for k in 1..=kmax {
                    let c = gravity::enumerate_out_gravity_mcar(a, k)
                        .map_err(invalid)?
                        .count();
                    let cat = rational_catalan(a, k * a - 1).map_err(invalid)?;
                    rep.check(format!("mcar a={a} k={k}"), &cat, c);
                    row.push(c.to_string());
                    json_rows.push(
                        serde_json::json!({"a": a, "k": k, "out": c, "catalan": json_count(&cat)}),
                    );
                }
                rows.push((a.to_string(), row));
            }
            if format == Format::Json {
                writeln!(out, "{}", serde_json::Value::Array(json_rows))?;
            } else {
                let header: Vec<String> = (1..=kmax).map(|k| k.to_string()).collect();
                write_grid(out, format, "a\\k", &header, &rows)?;
            }
        }
    }
    Ok(rep)
}

fn verify_bijections(rep: &mut RunReport, n: u64, k: u64) -> Result<(), CliError> {
    let tag = format!("n={n} k={k}");
    let ins: Vec<GravityDiagram> = gravity::enumerate_in_gravity(n, k)
        .map_err(invalid)?
        .collect();
    let outs: Vec<GravityDiagram> = gravity::enumerate_out_gravity(n, k)
        .map_err(invalid)?
        .collect();
    let b = k * (n - k);
    if b > 1 {
        let ok_in = ins.iter().all(|d| {
            gravity::psi_in(d)
                .and_then(|p| gravity::psi_in_inverse(n, k, &p))
                .as_ref()
                == Ok(d)
        });
        rep.check_true(format!("psi_in round trip {tag}"), ok_in);
        let ok_out = outs.iter().all(|d| {
            gravity::psi_out(d)
                .and_then(|p| gravity::psi_out_inverse(n, k, &p))
                .as_ref()
                == Ok(d)
        });
        rep.check_true(format!("psi_out round trip {tag}"), ok_out);
        let t = rational_shape(n - k, b - 1).map_err(invalid)?;
        let paths: std::collections::HashSet<_> = paths::enumerate_t_dyck(&t).collect();
        let image: std::collections::HashSet<_> = outs
            .iter()
            .filter_map(|d| gravity::psi_out(d).ok())
            .collect();
        rep.check_true(
            format!("psi_out onto rational Dyck paths {tag}"),
            image == paths,
        );
    }
    let ok_xi = outs.iter().all(|d| {
        gravity::xi(d)
            .and_then(|x| gravity::xi_inverse(&x))
            .as_ref()
            == Ok(d)
    });
    rep.check_true(format!("xi round trip {tag}"), ok_xi);
    for i in 0..n - k {
        let mut ok = true;
        let mut count = 0u64;
        for u in unified::enumerate_truncated(n, k, i).map_err(invalid)? {
            count += 1;
            ok &= unified::theta(&u)
                .and_then(|m| unified::theta_inverse(n, &m))
                .as_ref()
                == Ok(&u);
        }
        rep.check_true(format!("theta round trip {tag} i={i}"), ok);
        rep.check(
            format!("theta image size {tag} i={i}"),
            k_parking_number(k, n - k - 1, i),
            count,
        );
    }
    Ok(())
}

fn verify_lidskii(rep: &mut RunReport, nmax: u64) -> Result<(), CliError> {
    for n in 2..=nmax {
        for k in 1..n {
            let g = caracol_k(n as usize, k as usize).map_err(invalid)?;
            let cat = rational_catalan(n - k, k * (n - k) - 1).map_err(invalid)?;
            rep.check(
                format!("K(v_out) n={n} k={k}"),
                &cat,
                kostant(&g, &g.v_out()).map_err(invalid)?,
            );
            rep.check(
                format!("K(v_in) n={n} k={k}"),
                &cat,
                kostant(&g, &g.v_in()).map_err(invalid)?,
            );
            let ones = unified::volume_closed_form(n, k, 1, 1).map_err(invalid)?;
            rep.check(
                format!("volume ones n={n} k={k}"),
                ones,
                lidskii::volume(&g, &ones_flow(&g)).map_err(invalid)?,
            );
            let a = unit_flow(&g);
            let kv = kostant(&g, &a).map_err(invalid)?;
            rep.check(
                format!("binomial lattice form n={n} k={k}"),
                &kv,
                lattice_points_binomial(&g, &a).map_err(invalid)?,
            );
            rep.check(
                format!("multiset lattice form n={n} k={k}"),
                &kv,
                lattice_points_multiset(&g, &a).map_err(invalid)?,
            );
        }
    }
    Ok(())
}

fn verify_simplex(rep: &mut RunReport, total: u64, k: u64) -> Result<(), CliError> {
    let mut all_ok = true;
    let want = num_traits::Pow::pow(BigCount::from(k), total);
    for c0 in weak_compositions(total, k as usize) {
        match unified::simplex_partition(&c0) {
            Ok(parts) => {
                let sum: BigCount = parts
                    .iter()
                    .flatten()
                    .map(|d| multinomial(total, d).expect("composition"))
                    .sum();
                all_ok &= sum == want;
            }
            Err(_) => all_ok = false,
        }
    }
    rep.check_true(
        format!("disjoint cover and multinomial total for every c0, N={total} k={k}"),
        all_ok,
    );
    if k >= 2 && total.is_multiple_of(k) {
        let c0 = vec![total / k; k as usize];
        let parts = unified::simplex_partition(&c0).map_err(invalid)?;
        let sum: BigCount = parts
            .iter()
            .flatten()
            .map(|d| multinomial(total, d).expect("composition"))
            .sum();
        rep.result(format!("total for c0={}", fmt_vec(&c0)), &sum);
        rep.check(format!("total for c0={}", fmt_vec(&c0)), &want, sum);
    }
    Ok(())
}

fn verify_orbits(rep: &mut RunReport, n: u64, k: u64) -> Result<(), CliError> {
    let mn = (k + 1) * (n - k) - 2;
    for i in 0..n - k {
        let mut ok = true;
        for orbit in unified::orbits(n, k, i).map_err(invalid)? {
            let s: BigCount = orbit.iter().map(unified::completions).sum();
            ok &= s
                == BigCount::from(orbit.len())
                    * num_traits::Pow::pow(BigCount::from(k), mn - i - 1);
        }
        rep.check_true(format!("orbit sums n={n} k={k} i={i}"), ok);
        let sc = unified::standardized_count(n, k, i).map_err(invalid)?;
        if i == 0 {
            rep.result(format!("standardized count n={n} k={k} i=0"), &sc);
        }
        rep.check(
            format!("standardized count n={n} k={k} i={i}"),
            unified::standardized_closed_form(n, k, i).map_err(invalid)?,
            sc,
        );
    }
    Ok(())
}

fn need(v: Option<u64>, name: &str, suite: &str) -> Result<u64, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("verify {suite} needs --{name}")))
}

fn cmd_verify(
    suite: Suite,
    n: Option<u64>,
    k: Option<u64>,
    total: Option<u64>,
) -> Result<RunReport, CliError> {
    let mut rep = RunReport::new("verify");
    rep.input("suite", format!("{suite:?}").to_lowercase());
    match suite {
        Suite::Bijections => {
            let (n, k) = (need(n, "n", "bijections")?, need(k, "k", "bijections")?);
            if k == 0 || n <= k {
                return Err(CliError::Invalid("need n > k >= 1".into()));
            }
            verify_bijections(&mut rep, n, k)?;
        }
        Suite::Lidskii => verify_lidskii(&mut rep, n.unwrap_or(6))?,
        Suite::Simplex => {
            let (total, k) = (need(total, "N", "simplex")?, need(k, "k", "simplex")?);
            if k < 2 {
                return Err(CliError::Invalid("simplex needs k >= 2".into()));
            }
            verify_simplex(&mut rep, total, k)?;
        }
        Suite::Orbits => {
            let (n, k) = (need(n, "n", "orbits")?, need(k, "k", "orbits")?);
            if k == 0 || n <= k {
                return Err(CliError::Invalid("need n > k >= 1".into()));
            }
            verify_orbits(&mut rep, n, k)?;
        }
        Suite::All => {
            for (n, k) in [(5, 1), (5, 2), (6, 2), (7, 3)] {
                verify_bijections(&mut rep, n, k)?;
            }
            verify_lidskii(&mut rep, 6)?;
            for k in 2..=4 {
                verify_simplex(&mut rep, 6, k)?;
            }
            for (n, k) in [(5, 2), (6, 2), (7, 3)] {
                verify_orbits(&mut rep, n, k)?;
            }
        }
    }
    Ok(rep)
}

fn ensure_cap(estimate: BigCount, cap: u64) -> Result<(), CliError> {
    if estimate > BigCount::from(cap) {
        return Err(CliError::TooLarge { estimate, cap });
    }
    Ok(())
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    render: Render,
    item: &T,
    text: impl FnOnce() -> String,
) -> io::Result<()> {
    match render {
        Render::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(item).expect("serializable")
        ),
        Render::Text => writeln!(out, "{}", text()),
    }
}

fn cmd_enumerate(
    object: &Object,
    render: Render,
    cap: u64,
    out: &mut dyn Write,
) -> Result<RunReport, CliError> {
    let mut rep = RunReport::new("enumerate");
    let mut count = 0u64;
    match object {
        Object::Gravity {
            kind,
            family,
            n,
            a,
            k,
        } => {
            let k = *k;
            let items: Vec<GravityDiagram> = match family {
                FamilyArg::Caracol => {
                    let n = n.ok_or_else(|| {
                        CliError::Invalid("caracol gravity diagrams need --n".into())
                    })?;
                    if k >= 1 && n > k {
                        ensure_cap(
                            rational_catalan(n - k, k * (n - k) - 1).map_err(invalid)?,
                            cap,
                        )?;
                    }
                    rep.input("n", n);
                    match kind {
                        Kind::In => gravity::enumerate_in_gravity(n, k)
                            .map_err(invalid)?
                            .collect(),
                        Kind::Out => gravity::enumerate_out_gravity(n, k)
                            .map_err(invalid)?
                            .collect(),
                    }
                }
                FamilyArg::Mcar => {
                    let a = a.ok_or_else(|| {
                        CliError::Invalid("multicaracol gravity diagrams need --a".into())
                    })?;
                    if *kind == Kind::In {
                        return Err(CliError::Invalid(
                            "only out-degree diagrams are available for the multicaracol".into(),
                        ));
                    }
                    if a >= 1 && k >= 1 {
                        ensure_cap(rational_catalan(a, k * a - 1).map_err(invalid)?, cap)?;
                    }
                    rep.input("a", a);
                    gravity::enumerate_out_gravity_mcar(a, k)
                        .map_err(invalid)?
                        .collect()
                }
            };
            rep.input("k", k);
            for d in &items {
                count += 1;
                emit(out, render, d, || format!("#{count} {d}\n{}", d.render()))?;
            }
        }
        Object::Dyck { t, a, b } => {
            let t: Vec<u64> = match (t, a, b) {
                (Some(t), _, _) => t
                    .split(',')
                    .enumerate()
                    .map(|(p, x)| {
                        x.trim().parse().map_err(|_| {
                            parse_err("composition", t, p, "expected unsigned integers")
                        })
                    })
                    .collect::<Result<_, _>>()?,
                (None, Some(a), Some(b)) => rational_shape(*a, *b).map_err(invalid)?,
                _ => return Err(CliError::Invalid("give --t or both --a and --b".into())),
            };
            rep.input("t", fmt_vec(&t));
            let estimate = paths::enumerate_t_dyck(&t).take(cap as usize + 1).count() as u64;
            ensure_cap(BigCount::from(estimate), cap)?;
            for p in paths::enumerate_t_dyck(&t) {
                count += 1;
                emit(out, render, &p, || {
                    format!("{} area {}", fmt_vec(&p.shape), p.area())
                })?;
            }
        }
        Object::Unified { graph, netflow } => {
            let g = parse_graph(graph)?;
            let a = parse_netflow(&g, netflow, false)?;
            rep.input("graph", graph);
            rep.input("netflow", fmt_vec(&a));
            ensure_cap(lidskii::volume(&g, &a).map_err(invalid)?, cap)?;
            for d in unified::unified_diagrams(&g, &a).map_err(invalid)? {
                count += 1;
                emit(out, render, &d, || {
                    format!(
                        "s={} sigma={} alpha={} gamma={}",
                        fmt_vec(&d.path.shape),
                        fmt_vec(&d.sigma),
                        fmt_vec(&d.alpha),
                        fmt_vec(&d.gamma.flow)
                    )
                })?;
            }
        }
        Object::Truncated { n, k, i } => {
            if *k >= 1 && n > k && *i < n - k {
                ensure_cap(k_parking_number(*k, n - k - 1, *i), cap)?;
            }
            rep.input("n", n);
            rep.input("k", k);
            rep.input("i", i);
            for u in unified::enumerate_truncated(*n, *k, *i).map_err(invalid)? {
                count += 1;
                emit(out, render, &u, || {
                    let segs: Vec<String> = u
                        .segments
                        .iter()
                        .map(|s| format!("[{},{}]", s.left, s.right))
                        .collect();
                    format!(
                        "tail={} kappa={} segments={} hull={}",
                        fmt_vec(&u.tail),
                        fmt_vec(&u.kappa),
                        segs.join(""),
                        fmt_vec(&unified::k_hull(&u).hull)
                    )
                })?;
            }
        }
        Object::Multilabeled { k, r, i } => {
            if i > r || *k == 0 {
                return Err(CliError::Invalid("need k >= 1 and i <= r".into()));
            }
            ensure_cap(k_parking_number(*k, *r, *i), cap)?;
            rep.input("k", k);
            rep.input("r", r);
            rep.input("i", i);
            for m in enumerate_multilabeled(*k, *r, *i) {
                count += 1;
                emit(out, render, &m, || format!("{m}  {}", m.to_preference()))?;
            }
        }
    }
    rep.result("count", count);
    Ok(rep)
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code: 0 success, 1 a check failed, 2 usage or input error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = f;
                &mut file
            }
            Err(e) => {
                let _ = writeln!(err, "error: cannot open {}: {e}", path.display());
                return 2;
            }
        },
        None => out,
    };
    let started = Instant::now();
    let result = match &cli.command {
        Command::Volume {
            graph,
            netflow,
            method,
        } => cmd_volume(graph, netflow, *method, cli.cap),
        Command::Kostant { graph, vector } => cmd_kostant(graph, vector),
        Command::Tables {
            table: Table::Parking { k, rmax },
        } => cmd_parking(*k, *rmax, cli.format, sink),
        Command::Tables {
            table: Table::GravityCounts { family, nmax, kmax },
        } => cmd_gravity_counts(*family, *nmax, *kmax, cli.format, sink),
        Command::Verify { suite, n, k, total } => cmd_verify(*suite, *n, *k, *total),
        Command::Enumerate { render, object } => cmd_enumerate(object, *render, cli.cap, sink),
    };
    let mut rep = match result {
        Ok(r) => r,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => return 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    rep.wall_time_ms = started.elapsed().as_millis();
    let tables = matches!(cli.command, Command::Tables { .. });
    let written = match cli.format {
        Format::Json if !tables => writeln!(
            sink,
            "{}",
            serde_json::to_string_pretty(&rep).expect("serializable")
        ),
        // tables already wrote their body; only failures are worth reporting
        _ if tables => {
            let failed: Vec<&Check> = rep.checks.iter().filter(|c| !c.pass).collect();
            failed.iter().try_for_each(|c| {
                writeln!(
                    err,
                    "FAIL {} (expected {}, got {})",
                    c.name, c.expected, c.got
                )
            })
        }
        _ => rep.write_text(sink),
    };
    if let Err(e) = written.and_then(|_| sink.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return 0;
        }
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    if rep.passed() {
        0
    } else {
        1
    }
}
