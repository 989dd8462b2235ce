//! Run configuration: TOML text in, validated model and fields out.
//!
//! ```toml
//! [model]
//! regime = "flat"            # flat | warped | closed
//! m = 2
//! rep = "standard"           # standard | pauli (m = 2 only)
//! delta1 = 0.5               # flat only
//! delta2 = 1.0
//! twist = [0.3]              # ϱ_a, m − 1 entries, flat only
//! warp = [0.0, 0.4, -0.4]    # f(r) by powers of r, warped only
//! potential = 0.0            # closed only: ψ = potential·Id
//! boundary = "spectral"      # spectral | mixed (S = δ₁γ₀)
//!
//! [[phi]]
//! mode = [0]
//! coeffs = [[1, 0, 0, 0]]    # one row of ℓ entries per power of r; complex as [re, im]
//!
//! [[rho]]
//! mode = [0]
//! coeffs = [[1, 0, 0, 0]]
//!
//! [oracle]
//! n = 2048
//! richardson = true
//! t_min = 1e-5
//! t_max = 1e-2
//! outputs = 40
//! ratio = 1.01
//! fit_order = 5
//! tolerances = [1e-3, 1e-2, 2e-2]
//!
//! [output]
//! json = "report.json"
//! csv = "curve.csv"
//! ```

use std::fmt;
use std::ops::Range;
use std::path::PathBuf;

use heat_content::clifford::{build_rep, pauli_rep_m2};
use heat_content::fields::{DualField, Field, ModeField, MAX_DEGREE};
use heat_content::model::{ClosedModel, ConnectionKind, DiracModel, ModelConfig, WarpProfile};
use heat_content::oracle::{FitWindow, TimeSpec, Tolerances, MIN_FIT_POINTS, MIN_NODES};
use heat_content::spectral::BoundaryEndo;
use heat_content::{CMat, C64};
use serde::Deserialize;
use toml::Spanned;

/// A config problem located at a key path and, when known, a line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config error at line {line}, `{}`: {}", self.path, self.message),
            None => write!(f, "config error, `{}`: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: RawModel,
    #[serde(default)]
    phi: Vec<RawField>,
    #[serde(default)]
    rho: Vec<RawField>,
    #[serde(default)]
    oracle: RawOracle,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    regime: Spanned<String>,
    m: Spanned<usize>,
    rep: Option<Spanned<String>>,
    delta1: Option<Spanned<f64>>,
    delta2: Option<Spanned<f64>>,
    twist: Option<Spanned<Vec<f64>>>,
    warp: Option<Spanned<Vec<f64>>>,
    potential: Option<Spanned<f64>>,
    boundary: Option<Spanned<String>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged, expecting = "expected a number or a [re, im] pair")]
enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Scalar> for C64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(x) => C64::new(x, 0.0),
            Scalar::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    mode: Spanned<Vec<i64>>,
    coeffs: Spanned<Vec<Vec<Scalar>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOracle {
    n: Option<Spanned<usize>>,
    richardson: Option<bool>,
    t_min: Option<Spanned<f64>>,
    t_max: Option<Spanned<f64>>,
    outputs: Option<Spanned<usize>>,
    ratio: Option<Spanned<f64>>,
    fit_order: Option<Spanned<usize>>,
    tolerances: Option<Spanned<[f64; 3]>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Spectral,
    Mixed,
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Collar { model: Box<DiracModel>, boundary: BoundaryKind },
    Closed(ClosedModel),
}

impl Geometry {
    pub fn rank(&self) -> usize {
        match self {
            Geometry::Collar { model, .. } => model.rank(),
            Geometry::Closed(c) => c.rank(),
        }
    }

    /// `S = δ₁γ₀` in the radial coordinate, for the mixed operator.
    pub fn mixed_endo(model: &DiracModel) -> BoundaryEndo {
        BoundaryEndo::from_radial(&(model.gamma0() * C64::new(model.delta1(), 0.0)))
    }
}

#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub n: usize,
    pub richardson: bool,
    pub time: TimeSpec,
    pub fit_order: usize,
    pub tolerances: Tolerances,
}

impl OracleSettings {
    pub fn window(&self) -> FitWindow {
        FitWindow { t_min: self.time.t_min, t_max: self.time.t_max }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub label: String,
    pub geometry: Geometry,
    pub phi: Field,
    pub rho: DualField,
    pub oracle: OracleSettings,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

struct Locator<'a> {
    src: &'a str,
}

impl Locator<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.src[..span.start.min(self.src.len())].matches('\n').count() + 1
    }

    fn err<T>(
        &self,
        path: impl Into<String>,
        span: Range<usize>,
        message: impl Into<String>,
    ) -> Result<T, ConfigError> {
        Err(ConfigError { path: path.into(), line: Some(self.line(span)), message: message.into() })
    }
}

fn parse_error(src: &str, e: toml::de::Error) -> ConfigError {
    let Some(span) = e.span() else {
        return ConfigError { path: "<document>".into(), line: None, message: e.message().trim().to_string() };
    };
    let line = src[..span.start.min(src.len())].matches('\n').count() + 1;
    ConfigError { path: key_path_at(src, line), line: Some(line), message: e.message().trim().to_string() }
}

/// Dotted key path of the assignment on `line` (1-based), from the nearest
/// table header above it; array tables get their index, as in `phi[1].mode`.
fn key_path_at(src: &str, line: usize) -> String {
    let lines: Vec<&str> = src.lines().collect();
    let Some(here) = lines.get(line - 1) else {
        return "<document>".into();
    };
    let key = here.split_once('=').map(|(k, _)| k.trim()).filter(|k| !k.is_empty() && !k.starts_with('['));
    let mut table = None;
    for (i, l) in lines[..line.min(lines.len())].iter().enumerate().rev() {
        let t = l.trim();
        if let Some(name) = t.strip_prefix("[[").and_then(|r| r.split_once("]]")).map(|(n, _)| n.trim()) {
            let header = format!("[[{name}]]");
            let index = lines[..i].iter().filter(|l| l.trim().starts_with(&header)).count();
            table = Some(format!("{name}[{index}]"));
            break;
        }
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.split_once(']')).map(|(n, _)| n.trim()) {
            table = Some(name.to_string());
            break;
        }
    }
    match (table, key) {
        (Some(t), Some(k)) => format!("{t}.{k}"),
        (Some(t), None) => t,
        (None, Some(k)) => k.to_string(),
        (None, None) => "<document>".into(),
    }
}

pub fn parse(src: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(src).map_err(|e| parse_error(src, e))?;
    let loc = Locator { src };
    let geometry = build_geometry(&raw.model, &loc)?;
    let (m, rank) = (*raw.model.m.get_ref(), geometry.rank());
    let mode_len = match geometry {
        Geometry::Closed(_) => m,
        Geometry::Collar { .. } => m - 1,
    };
    let radial_only =
        matches!(&geometry, Geometry::Collar { model, .. } if model.kind() == ConnectionKind::WarpedCompatible);
    let closed = matches!(geometry, Geometry::Closed(_));
    let shape = FieldShape { rank, mode_len, radial_only, closed };
    let phi: Field = build_field("phi", &raw.phi, shape, &loc)?;
    let rho: DualField = build_field("rho", &raw.rho, shape, &loc)?;
    let oracle = build_oracle(&raw.oracle, &loc)?;
    let label = format!("{} m={} ℓ={rank}", raw.model.regime.get_ref(), m);
    Ok(RunConfig { label, geometry, phi, rho, oracle, json: raw.output.json, csv: raw.output.csv })
}

fn forbid<T>(loc: &Locator, key: &str, v: &Option<Spanned<T>>, regime: &str) -> Result<(), ConfigError> {
    match v {
        Some(s) => loc.err(format!("model.{key}"), s.span(), format!("not allowed for regime {regime:?}")),
        None => Ok(()),
    }
}

fn build_geometry(raw: &RawModel, loc: &Locator) -> Result<Geometry, ConfigError> {
    let m = *raw.m.get_ref();
    if !(1..=8).contains(&m) {
        return loc.err("model.m", raw.m.span(), format!("m must be between 1 and 8, got {m}"));
    }
    let rep = match raw.rep.as_ref().map(|s| s.get_ref().as_str()) {
        None | Some("standard") => build_rep(m),
        Some("pauli") if m == 2 => pauli_rep_m2(),
        Some("pauli") => {
            return loc.err("model.rep", raw.rep.as_ref().unwrap().span(), "the Pauli representation needs m = 2")
        }
        Some(other) => {
            return loc.err("model.rep", raw.rep.as_ref().unwrap().span(), format!("unknown representation {other:?}"))
        }
    };
    let boundary = match raw.boundary.as_ref().map(|s| s.get_ref().as_str()) {
        None | Some("spectral") => BoundaryKind::Spectral,
        Some("mixed") => BoundaryKind::Mixed,
        Some(other) => {
            return loc.err(
                "model.boundary",
                raw.boundary.as_ref().unwrap().span(),
                format!("unknown boundary {other:?}"),
            )
        }
    };
    let value = |v: &Option<Spanned<f64>>| v.as_ref().map_or(0.0, |s| *s.get_ref());
    let regime = raw.regime.get_ref().as_str();
    let assembled = match regime {
        "flat" => {
            forbid(loc, "warp", &raw.warp, regime)?;
            forbid(loc, "potential", &raw.potential, regime)?;
            let twist = raw.twist.as_ref().map_or_else(|| vec![0.0; m - 1], |t| t.get_ref().clone());
            if twist.len() != m - 1 {
                let span = raw.twist.as_ref().map_or(raw.m.span(), |t| t.span());
                return loc.err("model.twist", span, format!("expected {} entries, got {}", m - 1, twist.len()));
            }
            if let Some(d1) = &raw.delta1 {
                if d1.get_ref().is_nan() || *d1.get_ref() < 0.0 {
                    return loc.err("model.delta1", d1.span(), "δ₁ must be ≥ 0");
                }
            }
            let cfg = ModelConfig {
                kind: ConnectionKind::FlatTwisted,
                rep,
                delta1: value(&raw.delta1),
                delta2: value(&raw.delta2),
                twist,
                warp: WarpProfile::flat(),
            };
            cfg.assemble().map_err(|e| ConfigError {
                path: "model".into(),
                line: Some(loc.line(raw.regime.span())),
                message: e.to_string(),
            })?
        }
        "warped" => {
            forbid(loc, "delta1", &raw.delta1, regime)?;
            forbid(loc, "twist", &raw.twist, regime)?;
            forbid(loc, "potential", &raw.potential, regime)?;
            let Some(warp) = &raw.warp else {
                return loc.err("model.warp", raw.regime.span(), "warped models need a warp polynomial");
            };
            let profile = match WarpProfile::new(warp.get_ref().clone()) {
                Ok(p) => p,
                Err(e) => return loc.err("model.warp", warp.span(), e.to_string()),
            };
            let cfg = ModelConfig {
                kind: ConnectionKind::WarpedCompatible,
                rep,
                delta1: 0.0,
                delta2: value(&raw.delta2),
                twist: vec![0.0; m - 1],
                warp: profile,
            };
            cfg.assemble().map_err(|e| ConfigError {
                path: "model".into(),
                line: Some(loc.line(raw.regime.span())),
                message: e.to_string(),
            })?
        }
        "closed" => {
            for (key, v) in [("delta1", &raw.delta1), ("delta2", &raw.delta2)] {
                forbid(loc, key, v, regime)?;
            }
            forbid(loc, "twist", &raw.twist, regime)?;
            forbid(loc, "warp", &raw.warp, regime)?;
            if let Some(b) = &raw.boundary {
                return loc.err("model.boundary", b.span(), "closed models have no boundary");
            }
            let l = rep.rank();
            let psi = CMat::identity(l, l) * C64::new(value(&raw.potential), 0.0);
            let closed = ClosedModel::new(rep, psi).expect("ψ has the rank of the representation");
            return Ok(Geometry::Closed(closed));
        }
        other => {
            return loc.err(
                "model.regime",
                raw.regime.span(),
                format!("unknown regime {other:?} (expected flat, warped or closed)"),
            )
        }
    };
    Ok(Geometry::Collar { model: Box::new(assembled), boundary })
}

#[derive(Debug, Clone, Copy)]
struct FieldShape {
    rank: usize,
    mode_len: usize,
    radial_only: bool,
    closed: bool,
}

fn build_field<R>(key: &str, raw: &[RawField], shape: FieldShape, loc: &Locator) -> Result<ModeField<R>, ConfigError> {
    if raw.is_empty() {
        return Err(ConfigError { path: key.into(), line: None, message: "at least one mode is required".into() });
    }
    let mut out = ModeField::<R>::zero(shape.rank);
    for (i, f) in raw.iter().enumerate() {
        let path = format!("{key}[{i}]");
        let mode = f.mode.get_ref();
        if mode.len() != shape.mode_len {
            return loc.err(
                format!("{path}.mode"),
                f.mode.span(),
                format!("mode needs {} entries, got {}", shape.mode_len, mode.len()),
            );
        }
        if shape.radial_only && mode.iter().any(|&k| k != 0) {
            return loc.err(format!("{path}.mode"), f.mode.span(), "warped models only take radial (all-zero) modes");
        }
        let rows = f.coeffs.get_ref();
        if rows.is_empty() || rows.len() > MAX_DEGREE + 1 {
            return loc.err(
                format!("{path}.coeffs"),
                f.coeffs.span(),
                format!("need 1 to {} rows (one per power of r)", MAX_DEGREE + 1),
            );
        }
        if shape.closed && rows.len() > 1 {
            return loc.err(
                format!("{path}.coeffs"),
                f.coeffs.span(),
                "closed models take r-independent fields (one row)",
            );
        }
        if let Some((j, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != shape.rank) {
            return loc.err(
                format!("{path}.coeffs[{j}]"),
                f.coeffs.span(),
                format!("row has {} entries, the fiber has rank ℓ = {}", row.len(), shape.rank),
            );
        }
        let coeffs: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&s| s.into()).collect()).collect();
        if mode_present(&out, mode) {
            return loc.err(format!("{path}.mode"), f.mode.span(), format!("mode {mode:?} listed twice"));
        }
        let field = ModeField::<R>::from_coeffs(mode.clone(), &coeffs).map_err(|e| ConfigError {
            path: format!("{path}.coeffs"),
            line: Some(loc.line(f.coeffs.span())),
            message: e.to_string(),
        })?;
        out = out.add(&field);
    }
    Ok(out)
}

fn mode_present<R>(f: &ModeField<R>, k: &[i64]) -> bool {
    f.mode(k).is_some()
}

fn build_oracle(raw: &RawOracle, loc: &Locator) -> Result<OracleSettings, ConfigError> {
    let defaults = TimeSpec::default();
    let get = |v: &Option<Spanned<f64>>, d: f64| v.as_ref().map_or(d, |s| *s.get_ref());
    let n = raw.n.as_ref().map_or(2048, |s| *s.get_ref());
    if n < MIN_NODES {
        return loc.err(
            "oracle.n",
            raw.n.as_ref().unwrap().span(),
            format!("need at least {MIN_NODES} interior nodes"),
        );
    }
    let time = TimeSpec {
        t_min: get(&raw.t_min, defaults.t_min),
        t_max: get(&raw.t_max, defaults.t_max),
        outputs: raw.outputs.as_ref().map_or(defaults.outputs, |s| *s.get_ref()),
        ratio: get(&raw.ratio, defaults.ratio),
        ..defaults
    };
    if time.t_min.is_nan() || time.t_min <= 0.0 {
        return loc.err("oracle.t_min", raw.t_min.as_ref().unwrap().span(), "t_min must be positive");
    }
    if !time.t_max.is_finite() || time.t_max <= time.t_min {
        let span = raw.t_max.as_ref().or(raw.t_min.as_ref()).unwrap().span();
        return loc.err("oracle.t_max", span, "t_max must be finite and exceed t_min");
    }
    if time.outputs < MIN_FIT_POINTS {
        return loc.err(
            "oracle.outputs",
            raw.outputs.as_ref().unwrap().span(),
            format!("need at least {MIN_FIT_POINTS} output times for the fit"),
        );
    }
    if time.ratio.is_nan() || time.ratio < 1.0 {
        return loc.err("oracle.ratio", raw.ratio.as_ref().unwrap().span(), "step growth ratio must be ≥ 1");
    }
    let fit_order = raw.fit_order.as_ref().map_or(5, |s| *s.get_ref());
    if !(2..MIN_FIT_POINTS).contains(&fit_order) {
        return loc.err(
            "oracle.fit_order",
            raw.fit_order.as_ref().unwrap().span(),
            format!("fit order must be in 2..{MIN_FIT_POINTS}"),
        );
    }
    let tolerances = match &raw.tolerances {
        Some(t) if t.get_ref().iter().any(|&x| x.is_nan() || x <= 0.0) => {
            return loc.err("oracle.tolerances", t.span(), "tolerances must be positive")
        }
        Some(t) => Tolerances(*t.get_ref()),
        None => Tolerances::default(),
    };
    Ok(OracleSettings { n, richardson: raw.richardson.unwrap_or(true), time, fit_order, tolerances })
}
