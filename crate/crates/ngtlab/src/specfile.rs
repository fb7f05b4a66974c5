//! Manifold definition files: a sectioned key-value (TOML) format
//! with expression-string components.
//!
//! ```toml
//! name = "my-surface"            # optional
//! suite = "auto"                 # optional check-suite hint
//!
//! [chart]
//! coords = ["x1", "x2", "x3"]
//!
//! [domain]                       # optional sampling box, default [-1, 1]
//! x1 = [-2.0, 2.0]
//!
//! [metric]                       # upper-triangle keys "i,j" (1-based);
//! "1,1" = "1"                    # missing off-diagonal entries are 0,
//! "2,2" = "1 + x1^2"             # diagonal entries are required
//! "3,3" = "1"
//!
//! [two_form]                     # strict upper triangle only; or use
//! "1,2" = "sin(x3)"              # [endomorphism] with all "i,j" keys
//!
//! [contact]                      # optional (eta, xi) pair
//! eta = ["0", "0", "1"]
//! xi  = ["0", "0", "1"]
//! ```
//!
//! Exactly one of `[two_form]` / `[endomorphism]` must be present.
//! Lower-triangle or diagonal keys in `[two_form]` are rejected, so a
//! file cannot give both `F_12` and `F_21`.

use std::path::Path;
use std::rc::Rc;

use serde::Deserialize;

use crate::expr::{self, Expr};
use crate::manifolds::Manifold;
use crate::sampling;
use crate::tensor::{Chart, GeneralizedMetric, SkewPart, Symmetry, TensorField};
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Option<String>,
    description: Option<String>,
    suite: Option<String>,
    chart: RawChart,
    domain: Option<toml::Table>,
    metric: toml::Table,
    two_form: Option<toml::Table>,
    endomorphism: Option<toml::Table>,
    contact: Option<RawContact>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    coords: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContact {
    eta: Vec<String>,
    xi: Vec<String>,
}

fn parse_key(key: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || Error::Spec(format!("component key `{key}` is not of the form \"i,j\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i < 1 || j < 1 || i > n || j > n {
        return Err(Error::Spec(format!(
            "component key `{key}` out of range for dimension {n} (indices are 1-based)"
        )));
    }
    Ok((i - 1, j - 1))
}

fn expr_value(section: &str, key: &str, value: &toml::Value, chart: &Chart) -> Result<Expr> {
    let text = value.as_str().ok_or_else(|| {
        Error::Spec(format!("[{section}] `{key}` must be an expression string"))
    })?;
    chart
        .parse_expr(text)
        .map_err(|e| Error::Spec(format!("[{section}] `{key}`: {e}")))
}

fn metric_field(table: &toml::Table, chart: &Rc<Chart>) -> Result<TensorField> {
    let n = chart.dim();
    let mut comps = vec![expr::cnum(0.0); n * n];
    let mut seen = vec![false; n * n];
    for (key, value) in table {
        let (i, j) = parse_key(key, n)?;
        if i > j {
            return Err(Error::Spec(format!(
                "[metric] key `{key}`: give symmetric components in the upper triangle (i <= j)"
            )));
        }
        if seen[i * n + j] {
            return Err(Error::Spec(format!("[metric] duplicate component `{key}`")));
        }
        seen[i * n + j] = true;
        let e = expr_value("metric", key, value, chart)?;
        comps[i * n + j] = e.clone();
        comps[j * n + i] = e;
    }
    for i in 0..n {
        if !seen[i * n + i] {
            return Err(Error::Spec(format!(
                "[metric] missing diagonal component \"{0},{0}\"",
                i + 1
            )));
        }
    }
    TensorField::symbolic(chart.clone(), 2, 0, comps, Some(Symmetry::Symmetric))
}

fn two_form_field(table: &toml::Table, chart: &Rc<Chart>) -> Result<TensorField> {
    let n = chart.dim();
    let mut comps = vec![expr::cnum(0.0); n * n];
    let mut seen = vec![false; n * n];
    for (key, value) in table {
        let (i, j) = parse_key(key, n)?;
        if i >= j {
            return Err(Error::Spec(format!(
                "[two_form] key `{key}`: skew components take strict upper-triangle keys only \
                 (i < j); the lower triangle is implied"
            )));
        }
        if seen[i * n + j] {
            return Err(Error::Spec(format!("[two_form] duplicate component `{key}`")));
        }
        seen[i * n + j] = true;
        let e = expr_value("two_form", key, value, chart)?;
        comps[i * n + j] = e.clone();
        comps[j * n + i] = expr::neg(e);
    }
    TensorField::symbolic(chart.clone(), 2, 0, comps, Some(Symmetry::Skew))
}

fn endo_field(table: &toml::Table, chart: &Rc<Chart>) -> Result<TensorField> {
    let n = chart.dim();
    let mut comps = vec![expr::cnum(0.0); n * n];
    let mut seen = vec![false; n * n];
    for (key, value) in table {
        let (i, j) = parse_key(key, n)?;
        if seen[i * n + j] {
            return Err(Error::Spec(format!("[endomorphism] duplicate component `{key}`")));
        }
        seen[i * n + j] = true;
        comps[i * n + j] = expr_value("endomorphism", key, value, chart)?;
    }
    TensorField::symbolic(chart.clone(), 1, 1, comps, None)
}

fn vector_field(
    section: &str,
    comps: &[String],
    chart: &Rc<Chart>,
    cov: usize,
    con: usize,
) -> Result<TensorField> {
    let n = chart.dim();
    if comps.len() != n {
        return Err(Error::Spec(format!(
            "[contact] {section} has {} components, chart dimension is {n}",
            comps.len()
        )));
    }
    let exprs = comps
        .iter()
        .enumerate()
        .map(|(i, t)| {
            chart
                .parse_expr(t)
                .map_err(|e| Error::Spec(format!("[contact] {section}[{i}]: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    TensorField::symbolic(chart.clone(), cov, con, exprs, None)
}

fn domain_bounds(table: &toml::Table, chart: &Chart) -> Result<Vec<(f64, f64)>> {
    let mut bounds = vec![(-1.0, 1.0); chart.dim()];
    for (key, value) in table {
        let idx = chart
            .coords()
            .iter()
            .position(|c| c == key)
            .ok_or_else(|| Error::Spec(format!("[domain] unknown coordinate `{key}`")))?;
        let pair = value
            .as_array()
            .filter(|a| a.len() == 2)
            .map(|a| (a[0].as_float().or(a[0].as_integer().map(|v| v as f64)), a[1].as_float().or(a[1].as_integer().map(|v| v as f64))));
        match pair {
            Some((Some(lo), Some(hi))) if lo < hi => bounds[idx] = (lo, hi),
            _ => {
                return Err(Error::Spec(format!(
                    "[domain] `{key}` must be a two-element array [lo, hi] with lo < hi"
                )))
            }
        }
    }
    Ok(bounds)
}

/// Number of probe points used to validate a freshly parsed spec.
const PROBE_POINTS: usize = 8;
const PROBE_SEED: u64 = 0xA11CE;

/// Parses a manifold definition from text; the structural invariants
/// (symmetry by storage, metric invertibility, `eta`/`xi` shape) are
/// validated at [`PROBE_POINTS`] deterministic probe points.
pub fn parse_spec(text: &str) -> Result<Manifold> {
    let raw: RawSpec =
        toml::from_str(text).map_err(|e| Error::Spec(format!("parse error: {e}")))?;
    if raw.chart.coords.is_empty() {
        return Err(Error::Spec("[chart] coords must be non-empty".into()));
    }
    let mut chart = Chart::new(raw.chart.coords.clone())?;
    if let Some(dom) = &raw.domain {
        let bounds = domain_bounds(dom, &chart)?;
        chart = chart.with_domain(bounds);
    }
    let chart = Rc::new(chart);

    let g = metric_field(&raw.metric, &chart)?;
    let skew = match (&raw.two_form, &raw.endomorphism) {
        (Some(f), None) => SkewPart::TwoForm(two_form_field(f, &chart)?),
        (None, Some(a)) => SkewPart::Endomorphism(endo_field(a, &chart)?),
        (Some(_), Some(_)) => {
            return Err(Error::Spec(
                "give exactly one of [two_form] and [endomorphism], not both".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Spec(
                "missing skew part: give a [two_form] or an [endomorphism] section".into(),
            ))
        }
    };
    let (eta, xi) = match &raw.contact {
        Some(c) => (
            Some(vector_field("eta", &c.eta, &chart, 1, 0)?),
            Some(vector_field("xi", &c.xi, &chart, 0, 1)?),
        ),
        None => (None, None),
    };

    let manifold = Manifold {
        name: raw.name.unwrap_or_else(|| "spec".to_string()),
        description: raw.description.unwrap_or_default(),
        suite_hint: raw.suite.unwrap_or_else(|| "auto".to_string()),
        metric: GeneralizedMetric::new(g, skew)?,
        eta,
        xi,
    };

    for p in sampling::sample_points(&manifold.chart().sample_box(), PROBE_POINTS, PROBE_SEED) {
        manifold.frame(&p).map_err(|e| {
            Error::Spec(format!("invariant check failed at probe point {p:?}: {e}"))
        })?;
    }
    Ok(manifold)
}

/// [`parse_spec`] from a file path.
pub fn load_spec(path: impl AsRef<Path>) -> Result<Manifold> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text).map_err(|e| match e {
        Error::Spec(msg) => Error::Spec(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Emits the six-sphere nearly Kaehler structure as a spec file with
/// closed-form rational components: the symbolic twin of the analytic
/// builtin, mainly for round-trip testing and as a worked example of
/// the format.
pub fn s6_spec_text() -> String {
    use expr::{add, cnum, div, mul, sub, var};
    let names = ["x1", "x2", "x3", "x4", "x5", "x6"];
    let u: Vec<Expr> = names.iter().enumerate().map(|(i, n)| var(n, i)).collect();
    let mut d = cnum(1.0);
    for ui in &u {
        d = add(d, mul(ui.clone(), ui.clone()));
    }
    let d2 = mul(d.clone(), d.clone());

    // Embedding p and Jacobian J of the inverse stereographic map.
    let mut p: Vec<Expr> = u
        .iter()
        .map(|ui| div(mul(cnum(2.0), ui.clone()), d.clone()))
        .collect();
    p.push(sub(div(cnum(2.0), d.clone()), cnum(1.0)));
    let mut jac = vec![vec![cnum(0.0); 6]; 7];
    for a in 0..6 {
        for i in 0..6 {
            let mut v = div(
                mul(cnum(-4.0), mul(u[a].clone(), u[i].clone())),
                d2.clone(),
            );
            if a == i {
                v = add(v, div(cnum(2.0), d.clone()));
            }
            jac[a][i] = v;
        }
    }
    for i in 0..6 {
        jac[6][i] = div(mul(cnum(-4.0), u[i].clone()), d2.clone());
    }

    // Cross-product matrix of p on the imaginary 7-space.
    let triples = [(0, 1, 2), (0, 3, 4), (0, 6, 5), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 5, 4)];
    let mut cp = vec![vec![cnum(0.0); 7]; 7];
    for &(i, j, k) in &triples {
        for (b, c, a) in [(i, j, k), (j, k, i), (k, i, j)] {
            cp[a][c] = add(cp[a][c].clone(), p[b].clone());
            cp[a][b] = sub(cp[a][b].clone(), p[c].clone());
        }
    }

    // A = (d^2 / 4) J^t Cp J.
    let mut a_comp = vec![vec![cnum(0.0); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut v = cnum(0.0);
            for r in 0..7 {
                let mut cj = cnum(0.0);
                for s in 0..7 {
                    cj = add(cj, mul(cp[r][s].clone(), jac[s][j].clone()));
                }
                v = add(v, mul(jac[r][i].clone(), cj));
            }
            a_comp[i][j] = mul(div(d2.clone(), cnum(4.0)), v);
        }
    }

    let mut out = String::new();
    out.push_str("name = \"s6-nearly-kahler-spec\"\nsuite = \"hermitian\"\n\n[chart]\ncoords = [");
    out.push_str(&names.map(|n| format!("\"{n}\"")).join(", "));
    out.push_str("]\n\n[metric]\n");
    for i in 0..6 {
        out.push_str(&format!("\"{0},{0}\" = \"4 / ({1})^2\"\n", i + 1, d));
    }
    out.push_str("\n[endomorphism]\n");
    for i in 0..6 {
        for j in 0..6 {
            out.push_str(&format!("\"{},{}\" = \"{}\"\n", i + 1, j + 1, a_comp[i][j]));
        }
    }
    out
}
