//! Experiment configuration: flat sectioned key-value text (diff-friendly)
//! with a JSON equivalent, validated into a ready-to-run problem.
//!
//! ```text
//! [domain]
//! shape = square        # disk | annulus | square | rectangle | ellipse | lshape
//! a = 1.0               # shape-specific sizes: r, r0/r1, a/b
//! offset = 0.0 0.0
//! h = 0.05
//!
//! [params]
//! n = 2
//! p = 2.0
//! ell = -1.0
//!
//! [beta]
//! kind = formula        # constant | formula
//! value = 1 + x*x
//!
//! [f]
//! kind = constant
//! value = 1.0
//!
//! [verify]
//! checks = norm_comparison pointwise faber_krahn minima flux
//!
//! [output]
//! dir = out
//! ```

use crate::error::Error;
use crate::expr::Expr;
use crate::field::ScalarField;
use crate::harness::VerifyConfig;
use crate::mesh::{self, ShapeSpec, TriMesh};
use crate::params::WeightParams;
use crate::solver::{CoefRule, RobinCoefficient, RobinProblem};
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub params: ParamSpec,
    pub beta: CoefSpec,
    pub f: CoefSpec,
    pub solver: SolverSpec,
    pub eigen: EigenSpec,
    pub verify: VerifySpec,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainSpec {
    pub shape: String,
    /// disk radius
    pub r: f64,
    /// annulus radii
    pub r0: f64,
    pub r1: f64,
    /// square half-side / rectangle & ellipse semi-axes
    pub a: f64,
    pub b: f64,
    pub offset: [f64; 2],
    pub h: f64,
}

impl Default for DomainSpec {
    fn default() -> Self {
        Self {
            shape: "disk".into(),
            r: 1.0,
            r0: 0.5,
            r1: 1.0,
            a: 1.0,
            b: 0.5,
            offset: [0.0, 0.0],
            h: 0.05,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamSpec {
    pub n: u32,
    pub p: f64,
    pub ell: f64,
}

impl Default for ParamSpec {
    fn default() -> Self {
        Self { n: 2, p: 2.0, ell: -1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoefSpec {
    /// "constant" or "formula"
    pub kind: String,
    pub value: String,
}

impl Default for CoefSpec {
    fn default() -> Self {
        Self { kind: "constant".into(), value: "1.0".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    /// 0 = pick by p
    pub tol: f64,
    pub eps0: f64,
    pub eps_min: f64,
    pub max_newton: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            tol: 0.0,
            eps0: crate::tol::EPS0,
            eps_min: crate::tol::EPS_MIN,
            max_newton: crate::tol::MAX_NEWTON,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenSpec {
    pub shoot_tol: f64,
    pub grid: usize,
}

impl Default for EigenSpec {
    fn default() -> Self {
        Self { shoot_tol: crate::tol::EIGEN_SHOOT_REL, grid: 4096 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySpec {
    /// Subset of: norm_comparison, pointwise, faber_krahn, minima, flux.
    pub checks: Vec<String>,
    pub c_tol_pointwise: f64,
    pub c_tol_integral: f64,
    pub levels: usize,
    pub radial_grid: usize,
    pub lorentz: bool,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self {
            checks: vec![
                "norm_comparison".into(),
                "pointwise".into(),
                "faber_krahn".into(),
                "minima".into(),
                "flux".into(),
            ],
            c_tol_pointwise: crate::tol::C_TOL_POINTWISE,
            c_tol_integral: crate::tol::C_TOL_INTEGRAL,
            levels: 512,
            radial_grid: crate::radial::RADIAL_GRID,
            lorentz: true,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
    /// Golden margin directory for regression comparison ("" = disabled).
    pub golden: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: "out".into(), golden: String::new() }
    }
}

impl ExperimentConfig {
    /// Parse from text: JSON when the first non-space byte is `{`,
    /// otherwise the flat sectioned format.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::ConfigParse {
                line: e.line(),
                field: "json".into(),
                message: e.to_string(),
            })
        } else {
            Self::parse_flat(text)
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    fn parse_flat(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(bad(line_no, "section", "unterminated section header"));
                }
                section = line[1..line.len() - 1].trim().to_lowercase();
                let known =
                    ["domain", "params", "beta", "f", "solver", "eigen", "verify", "output"];
                if !known.contains(&section.as_str()) {
                    return Err(bad(line_no, &section, "unknown section"));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(line_no, line, "expected `key = value`"))?;
            let key = key.trim().to_lowercase();
            let value = value.trim().to_string();
            cfg.apply(&section, &key, &value, line_no)?;
        }
        Ok(cfg)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str, line: usize) -> Result<()> {
        let fnum = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| bad(line, key, &format!("not a number: `{v}`")))
        };
        let fint = |v: &str| -> Result<usize> {
            v.parse::<usize>().map_err(|_| bad(line, key, &format!("not an integer: `{v}`")))
        };
        match (section, key) {
            ("domain", "shape") => self.domain.shape = value.to_lowercase(),
            ("domain", "r") => self.domain.r = fnum(value)?,
            ("domain", "r0") => self.domain.r0 = fnum(value)?,
            ("domain", "r1") => self.domain.r1 = fnum(value)?,
            ("domain", "a" | "size") => self.domain.a = fnum(value)?,
            ("domain", "b" | "size2") => self.domain.b = fnum(value)?,
            ("domain", "h") => self.domain.h = fnum(value)?,
            ("domain", "offset") => {
                let parts: Vec<&str> = value
                    .trim_matches(|c| c == '(' || c == ')')
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .collect();
                if parts.len() != 2 {
                    return Err(bad(line, key, "offset expects two numbers"));
                }
                self.domain.offset = [fnum(parts[0])?, fnum(parts[1])?];
            }
            ("params", "n") => {
                self.params.n = value
                    .parse()
                    .map_err(|_| bad(line, key, &format!("not an integer: `{value}`")))?
            }
            ("params", "p") => self.params.p = fnum(value)?,
            ("params", "ell" | "l") => self.params.ell = fnum(value)?,
            ("beta", "kind") => self.beta.kind = value.to_lowercase(),
            ("beta", "value") => self.beta.value = value.to_string(),
            ("f", "kind") => self.f.kind = value.to_lowercase(),
            ("f", "value") => self.f.value = value.to_string(),
            ("solver", "tol") => self.solver.tol = fnum(value)?,
            ("solver", "eps0") => self.solver.eps0 = fnum(value)?,
            ("solver", "eps_min") => self.solver.eps_min = fnum(value)?,
            ("solver", "max_newton") => self.solver.max_newton = fint(value)?,
            ("eigen", "shoot_tol") => self.eigen.shoot_tol = fnum(value)?,
            ("eigen", "grid") => self.eigen.grid = fint(value)?,
            ("verify", "checks") => {
                self.verify.checks =
                    value.split_whitespace().map(|s| s.to_lowercase()).collect()
            }
            ("verify", "c_tol_pointwise") => self.verify.c_tol_pointwise = fnum(value)?,
            ("verify", "c_tol_integral") => self.verify.c_tol_integral = fnum(value)?,
            ("verify", "levels") => self.verify.levels = fint(value)?,
            ("verify", "radial_grid") => self.verify.radial_grid = fint(value)?,
            ("verify", "lorentz") => {
                self.verify.lorentz = value
                    .parse()
                    .map_err(|_| bad(line, key, "expected true/false"))?
            }
            ("output", "dir") => self.output.dir = value.to_string(),
            ("output", "golden") => self.output.golden = value.to_string(),
            ("", _) => return Err(bad(line, key, "key outside any [section]")),
            _ => return Err(bad(line, key, &format!("unknown key in [{section}]"))),
        }
        Ok(())
    }

    pub fn shape_spec(&self) -> Result<ShapeSpec> {
        let d = &self.domain;
        Ok(match d.shape.as_str() {
            "disk" => ShapeSpec::Disk { r: d.r, offset: d.offset, h: d.h },
            "annulus" => ShapeSpec::Annulus { r0: d.r0, r1: d.r1, offset: d.offset, h: d.h },
            "square" => ShapeSpec::Square { a: d.a, offset: d.offset, h: d.h },
            "rectangle" => ShapeSpec::Rectangle { a: d.a, b: d.b, offset: d.offset, h: d.h },
            "ellipse" => ShapeSpec::Ellipse { a: d.a, b: d.b, offset: d.offset, h: d.h },
            "lshape" => ShapeSpec::LShape { a: d.a, offset: d.offset, h: d.h },
            other => return Err(Error::UnknownShape(other.into())),
        })
    }

    pub fn weight_params(&self) -> Result<WeightParams> {
        WeightParams::new(self.params.n, self.params.p, self.params.ell)
    }

    /// Build the mesh and the fully validated problem.
    pub fn build_problem(&self) -> Result<(RobinProblem, VerifyConfig)> {
        let params = self.weight_params()?;
        if params.n != 2 {
            return Err(Error::InvalidInput("meshing supports n = 2 only".into()));
        }
        let mesh = mesh::generate(&self.shape_spec()?)?;
        let beta = coef_rule(&self.beta, &mesh)?;
        let beta = RobinCoefficient::new(&mesh, beta)?;
        let f = coef_field(&self.f, &mesh)?;
        let problem = RobinProblem::new(mesh, params, f, beta)?;
        let mut vc = VerifyConfig::for_params(&params);
        if self.solver.tol > 0.0 {
            vc.solver.tol = self.solver.tol;
        }
        vc.solver.eps0 = self.solver.eps0;
        vc.solver.eps_min = self.solver.eps_min;
        vc.solver.max_newton = self.solver.max_newton;
        vc.eigen.shoot_tol = self.eigen.shoot_tol;
        vc.eigen.grid = self.eigen.grid;
        vc.levels = self.verify.levels;
        vc.radial_grid = self.verify.radial_grid;
        vc.c_tol_pointwise = self.verify.c_tol_pointwise;
        vc.c_tol_integral = self.verify.c_tol_integral;
        vc.lorentz_info = self.verify.lorentz;
        Ok((problem, vc))
    }
}

fn bad(line: usize, field: &str, message: &str) -> Error {
    Error::ConfigParse {
        line,
        field: field.to_string(),
        message: message.to_string(),
    }
}

fn coef_rule(spec: &CoefSpec, _mesh: &TriMesh) -> Result<CoefRule> {
    match spec.kind.as_str() {
        "constant" => {
            let v = spec
                .value
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad constant `{}`", spec.value)))?;
            Ok(CoefRule::Constant(v))
        }
        "formula" => Ok(CoefRule::Formula(Expr::parse(&spec.value)?)),
        other => Err(Error::InvalidInput(format!(
            "unknown coefficient kind `{other}` (constant | formula)"
        ))),
    }
}

fn coef_field(spec: &CoefSpec, mesh: &TriMesh) -> Result<ScalarField> {
    match spec.kind.as_str() {
        "constant" => {
            let v = spec
                .value
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad constant `{}`", spec.value)))?;
            Ok(ScalarField::constant(mesh, v))
        }
        "formula" => {
            let e = Expr::parse(&spec.value)?;
            ScalarField::from_fn(mesh, |x, y| e.eval(x, y))
        }
        other => Err(Error::InvalidInput(format!(
            "unknown coefficient kind `{other}` (constant | formula)"
        ))),
    }
}

/// Parse a mesh generator spec string: `disk r=1 h=0.05`,
/// `square a=1 offset=(0,0) h=0.1`, ....
pub fn parse_shape_spec(text: &str) -> Result<ShapeSpec> {
    let mut tokens = text.split_whitespace();
    let shape = tokens
        .next()
        .ok_or_else(|| Error::UnknownShape("(empty)".into()))?
        .to_lowercase();
    let mut d = DomainSpec { shape: shape.clone(), ..Default::default() };
    let mut cfg = ExperimentConfig { domain: d.clone(), ..Default::default() };
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| bad(1, tok, "expected key=value"))?;
        cfg.apply("domain", &key.to_lowercase(), value, 1)?;
    }
    d = cfg.domain;
    d.shape = shape;
    let full = ExperimentConfig { domain: d, ..Default::default() };
    full.shape_spec()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLAT: &str = "\
# demo configuration
[domain]
shape = square
a = 1.0
offset = 0.0 0.0
h = 0.1

[params]
n = 2
p = 2.0
ell = -1.0

[beta]
kind = formula
value = 1 + x*x

[verify]
checks = norm_comparison minima

[output]
dir = target/cfg_test_out
";

    #[test]
    fn flat_and_json_agree() {
        let cfg = ExperimentConfig::parse(FLAT).unwrap();
        assert_eq!(cfg.domain.shape, "square");
        assert_eq!(cfg.verify.checks, vec!["norm_comparison", "minima"]);
        let json = serde_json::to_string(&cfg).unwrap();
        let cfg2 = ExperimentConfig::parse(&json).unwrap();
        assert_eq!(cfg2.beta.value, "1 + x*x");
        assert_eq!(cfg2.domain.h, 0.1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_cfg = "[domain]\nshape = square\nh == 0.1\n";
        match ExperimentConfig::parse(bad_cfg) {
            Err(Error::ConfigParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let unknown = "[domain]\nfrobnicate = 3\n";
        assert!(matches!(
            ExperimentConfig::parse(unknown),
            Err(Error::ConfigParse { line: 2, .. })
        ));
    }

    #[test]
    fn builds_problem() {
        let cfg = ExperimentConfig::parse(FLAT).unwrap();
        let (prob, _vc) = cfg.build_problem().unwrap();
        assert_eq!(prob.params.p, 2.0);
        assert!(prob.beta.inf() >= 1.0 - 1e-9);
    }

    #[test]
    fn hypothesis_violation_from_config() {
        let mut cfg = ExperimentConfig::parse(FLAT).unwrap();
        cfg.params.ell = -3.0;
        match cfg.build_problem() {
            Err(e @ Error::HypothesisViolated { name: "(H2)", .. }) => {
                assert_eq!(e.exit_code(), 3);
            }
            other => panic!("expected (H2) violation, got {other:?}"),
        }
    }

    #[test]
    fn shape_spec_strings() {
        let s = parse_shape_spec("disk r=1 h=0.05").unwrap();
        assert_eq!(s, ShapeSpec::Disk { r: 1.0, offset: [0.0, 0.0], h: 0.05 });
        let s = parse_shape_spec("square a=1 offset=(0.3,0.2) h=0.1").unwrap();
        assert_eq!(s, ShapeSpec::Square { a: 1.0, offset: [0.3, 0.2], h: 0.1 });
        assert!(parse_shape_spec("dodecahedron x=1").is_err());
    }
}
