//! Instance files: `{version, kind, parameters, mode?, precision_bits?, seed?}`.

use std::path::Path;

use serde::Deserialize;

use heunfactor::exactalg::{ParamRing, PolyRing};
use heunfactor::factorize::ApparentFuchsian;
use heunfactor::heun::{HeunSpec, ParamValue};
use heunfactor::Rational;

use crate::error::CliError;

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Heun,
    ApparentFuchsian,
    Xjacobi,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub kind: Kind,
    pub parameters: serde_json::Value,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub precision_bits: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub t: ParamValue,
    pub m: u32,
}

/// `D^2 + (c/z + d/(z-1) - sum m_k/(z-t_k)) D + ab/(z(z-1)) + sum p_k/(z(z-1)(z-t_k))`
/// with concrete `a + b`, `ab`, `c`, `t_k`. Absent residues become the
/// symbols `p1, .., pM`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuchsianSpec {
    pub ab_sum: ParamValue,
    pub ab_prod: ParamValue,
    pub gamma: ParamValue,
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub residues: Option<Vec<ParamValue>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XJacobiSpec {
    pub k: u32,
    pub g: ParamValue,
    pub h: ParamValue,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Heun(HeunSpec),
    Fuchsian(FuchsianSpec),
    XJacobi(XJacobiSpec),
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub instance: Instance,
    pub mode: Option<Mode>,
    pub precision_bits: Option<usize>,
    pub seed: Option<u64>,
}

pub fn parse(text: &str, origin: &str) -> Result<Loaded, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => CliError::Schema(format!("{origin}: {e}")),
        _ => CliError::Json { path: origin.to_string(), message: e.to_string() },
    })?;
    if file.version != VERSION {
        return Err(CliError::Schema(format!("{origin}: unsupported version {}, expected {VERSION}", file.version)));
    }
    let schema = |e: serde_json::Error| CliError::Schema(format!("{origin}: parameters: {e}"));
    let instance = match file.kind {
        Kind::Heun => Instance::Heun(serde_json::from_value(file.parameters).map_err(schema)?),
        Kind::ApparentFuchsian => Instance::Fuchsian(serde_json::from_value(file.parameters).map_err(schema)?),
        Kind::Xjacobi => Instance::XJacobi(serde_json::from_value(file.parameters).map_err(schema)?),
    };
    Ok(Loaded { instance, mode: file.mode, precision_bits: file.precision_bits, seed: file.seed })
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

pub fn concrete(v: &ParamValue, name: &str) -> Result<Rational, CliError> {
    v.as_rational()?.ok_or_else(|| CliError::Schema(format!("{name} must be a rational, got a symbol")))
}

impl FuchsianSpec {
    pub fn profile(&self) -> Vec<u32> {
        self.points.iter().map(|p| p.m).collect()
    }

    pub fn has_residues(&self) -> bool {
        self.residues.is_some()
    }

    pub fn build(&self) -> Result<ApparentFuchsian<Rational>, CliError> {
        let names: Vec<String> = match &self.residues {
            Some(r) if r.len() != self.points.len() => {
                return Err(CliError::Schema(format!("{} points but {} residues", self.points.len(), r.len())))
            }
            Some(_) => Vec::new(),
            None => (1..=self.points.len()).map(|k| format!("p{k}")).collect(),
        };
        let ring = ParamRing::<Rational>::new(PolyRing::new(names.clone()));
        let c = |v: &ParamValue, name: &str| concrete(v, name).map(|r| ring.rational(&r));
        let sing = self
            .points
            .iter()
            .enumerate()
            .map(|(k, p)| Ok((c(&p.t, &format!("points[{k}].t"))?, p.m)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let p = match &self.residues {
            Some(r) => r.iter().enumerate().map(|(k, v)| c(v, &format!("residues[{k}]"))).collect::<Result<Vec<_>, _>>()?,
            None => names.iter().map(|n| ring.var(n)).collect::<Result<Vec<_>, _>>().map_err(|e| CliError::Schema(e.to_string()))?,
        };
        Ok(ApparentFuchsian::new(c(&self.ab_sum, "ab_sum")?, c(&self.ab_prod, "ab_prod")?, c(&self.gamma, "gamma")?, sing, p)?)
    }
}
