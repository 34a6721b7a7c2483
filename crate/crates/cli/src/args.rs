use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rellich::witness::CutoffShape;
use rellich::{Domain, Exponent, ModeSet, ProblemParams, C64};

#[derive(Parser, Debug)]
#[command(name = "rellich", version, about = "Validity, sharp constants and numerical witnesses for weighted Rellich inequalities")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub cmd: Command,
}

/// Settings shared by every subcommand; also accepted from a config file.
#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// File of `key = value` lines supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Relative quadrature tolerance, in [1e-14, 1e-4].
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Cutoff scale k of witness families.
    #[arg(long, global = true, default_value_t = 1024.0)]
    pub k: f64,
    /// Natural log of the cutoff scale; overrides --k.
    #[arg(long = "log-k", global = true)]
    pub log_k: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Shape::Stretched)]
    pub shape: Shape,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Narrow,
    Stretched,
}

impl From<Shape> for CutoffShape {
    fn from(s: Shape) -> Self {
        match s {
            Shape::Narrow => CutoffShape::Narrow,
            Shape::Stretched => CutoffShape::Stretched,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Rellich,
    Cz,
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// Space dimension.
    #[arg(long = "N")]
    pub dim: u32,
    /// Integrability exponent, a decimal or `inf`.
    #[arg(long, value_parser = parse_exponent)]
    pub p: Exponent,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Potential coefficient as `re,im` or `re`.
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: C64,
    /// Drift coefficient as `re,im` or `re`.
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub c: C64,
    /// `whole` or `half`.
    #[arg(long, default_value = "whole", value_parser = parse_domain)]
    pub domain: Domain,
    /// `all` or a comma-separated list of harmonic orders.
    #[arg(long, default_value = "all", value_parser = parse_modes)]
    pub modes: ModeSet,
}

impl ProblemArgs {
    pub fn params(&self) -> ProblemParams {
        ProblemParams::new(self.dim, self.p, self.alpha)
            .with_b(self.b)
            .with_c(self.c)
            .with_domain(self.domain)
            .with_modes(self.modes.clone())
    }
}

#[derive(Args, Debug, Clone)]
pub struct HardyArgs {
    #[arg(long = "N")]
    pub dim: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 64.0)]
    pub m: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Whether the inequality holds and at which harmonic orders it fails.
    #[command(args_override_self = true)]
    Validity {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value_t = Operator::Rellich)]
        operator: Operator,
        /// Largest order examined when the mode set is unbounded.
        #[arg(long = "n-max")]
        n_max: Option<u32>,
    },
    /// Best constant, or the certified bracket around it.
    #[command(args_override_self = true)]
    Constant {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Restrict to one harmonic order.
        #[arg(long)]
        n: Option<u32>,
    },
    /// CSV table of constants over a grid of weights and exponents.
    #[command(args_override_self = true)]
    Table {
        #[arg(long = "N")]
        dim: u32,
        /// Comma list or `start:stop:step`.
        #[arg(long = "alpha-grid", value_parser = parse_grid, allow_hyphen_values = true)]
        alpha_grid: Grid,
        /// Comma list or `start:stop:step`; `inf` allowed in lists.
        #[arg(long = "p-grid", value_parser = parse_exponent_grid)]
        p_grid: ExponentGrid,
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        b: C64,
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        c: C64,
        #[arg(long, default_value = "whole", value_parser = parse_domain)]
        domain: Domain,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rellich quotient of one profile against the predicted constant.
    #[command(args_override_self = true)]
    Quotient {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// `witness[:eta]`, `plateau:lo,hi,t` or `random:index`.
        #[arg(long, default_value = "witness", value_parser = parse_profile, allow_hyphen_values = true)]
        profile: ProfileSpec,
    },
    /// Infimum of witness quotients over the oscillation parameter.
    #[command(args_override_self = true)]
    Scan {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
    /// Quotient of a named witness family.
    Witness {
        #[command(subcommand)]
        family: WitnessCommand,
    },
    /// Distance from a point to the shifted spectral parabolas.
    #[command(args_override_self = true)]
    Spectrum {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: C64,
        /// Largest harmonic order when the mode set is unbounded.
        #[arg(long = "n-max", default_value_t = 64)]
        n_max: u32,
    },
    /// Run a numerical certification suite, one JSON line per check.
    #[command(args_override_self = true)]
    Verify {
        /// constants, witnesses, hardy, cz, halfspace, spectra or all.
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCommand {
    /// Radial Hardy witness.
    #[command(args_override_self = true)]
    Hardy(HardyArgs),
    /// Half-space Hardy witness (p at least 2).
    #[command(name = "halfspace-hardy", args_override_self = true)]
    HalfspaceHardy(HardyArgs),
    /// Oscillating Rellich witness on one harmonic order.
    #[command(args_override_self = true)]
    Rellich {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Oscillation parameter; the nearest point of the parabola when absent.
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<f64>,
    },
    /// Planar Calderon-Zygmund counterexample.
    #[command(args_override_self = true)]
    Cz2 {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: f64,
        /// Weight; defaults to the critical value 2 - 2/p.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid(pub Vec<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentGrid(pub Vec<Exponent>);

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileSpec {
    Witness(Option<f64>),
    Plateau { lo: f64, hi: f64, t: f64 },
    Random(usize),
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    Exponent::from_str(s).map_err(|e| e.to_string())
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    Domain::from_str(s).map_err(|e| e.to_string())
}

fn parse_modes(s: &str) -> Result<ModeSet, String> {
    ModeSet::from_str(s).map_err(|e| e.to_string())
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(parse_f64(re)?, parse_f64(im)?)),
        None => Ok(C64::new(parse_f64(s)?, 0.0)),
    }
}

/// Closed range `start:stop:step`, endpoints included up to rounding.
fn parse_range(s: &str) -> Result<Option<Vec<f64>>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [_] => Ok(None),
        [a, b, h] => {
            let (a, b, h) = (parse_f64(a)?, parse_f64(b)?, parse_f64(h)?);
            if !(h > 0.0) || b < a {
                return Err(format!("range '{s}' needs start <= stop and a positive step"));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize;
            if count > 100_000 {
                return Err(format!("range '{s}' has too many points"));
            }
            Ok(Some((0..=count).map(|i| a + h * i as f64).collect()))
        }
        _ => Err(format!("cannot parse range '{s}'")),
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    if let Some(v) = parse_range(s)? {
        return Ok(Grid(v));
    }
    let v = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_f64)
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty grid".into());
    }
    Ok(Grid(v))
}

fn parse_exponent_grid(s: &str) -> Result<ExponentGrid, String> {
    let v = match parse_range(s)? {
        Some(v) => v.into_iter().map(|p| Exponent::new(p).map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?,
        None => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse_exponent)
            .collect::<Result<Vec<_>, _>>()?,
    };
    if v.is_empty() {
        return Err("empty grid".into());
    }
    Ok(ExponentGrid(v))
}

fn parse_profile(s: &str) -> Result<ProfileSpec, String> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    match kind.trim() {
        "witness" if rest.is_empty() => Ok(ProfileSpec::Witness(None)),
        "witness" => Ok(ProfileSpec::Witness(Some(parse_f64(rest)?))),
        "plateau" => {
            let v = rest.split(',').map(parse_f64).collect::<Result<Vec<_>, _>>()?;
            match v.as_slice() {
                &[lo, hi, t] if lo < hi && t > 0.0 => Ok(ProfileSpec::Plateau { lo, hi, t }),
                _ => Err("plateau needs lo,hi,t with lo < hi and t > 0".into()),
            }
        }
        "random" => rest.trim().parse().map(ProfileSpec::Random).map_err(|_| format!("bad index '{rest}'")),
        other => Err(format!("unknown profile '{other}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_pairs_and_reals() {
        assert_eq!(parse_complex("-4").unwrap(), C64::new(-4.0, 0.0));
        assert_eq!(parse_complex("1.5,-0.25").unwrap(), C64::new(1.5, -0.25));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.5").unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("-1,2").unwrap().0, vec![-1.0, 2.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:0:0.5").is_err());
        let p = parse_exponent_grid("1.5,2,inf").unwrap().0;
        assert_eq!(p[2], Exponent::Infinite);
        assert!(parse_exponent_grid("0.5").is_err());
    }

    #[test]
    fn profiles() {
        assert_eq!(parse_profile("witness").unwrap(), ProfileSpec::Witness(None));
        assert_eq!(parse_profile("witness:-0.5").unwrap(), ProfileSpec::Witness(Some(-0.5)));
        assert_eq!(parse_profile("plateau:-1,1,0.5").unwrap(), ProfileSpec::Plateau { lo: -1.0, hi: 1.0, t: 0.5 });
        assert_eq!(parse_profile("random:3").unwrap(), ProfileSpec::Random(3));
        assert!(parse_profile("plateau:1,-1,0.5").is_err());
    }
}
