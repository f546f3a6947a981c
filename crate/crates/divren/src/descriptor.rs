//! JSON descriptions of kernels, test functions, distributions and
//! extensions. Every descriptor is a tagged object (`"type": …`) that
//! builds the matching core value, and extensions serialize back.

use std::collections::BTreeMap;

use divren_core::distribution::{Distribution, Kernel, MultiIndex, Smoothing, TestFunction};
use divren_core::error::{Error, Result};
use divren_core::extension::{
    extend_low_sd, extend_renormalized, geometric_schedule, log_kernel_form, CutoffFunction, CutoffKind,
    ExtendedDistribution, LowSdExtension,
};
use divren_core::quadrature::QuadratureConfig;
use serde::{Deserialize, Serialize};

fn one() -> f64 {
    1.0
}

fn dim_one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Constant {
        value: f64,
    },
    /// `coefficient · |t|^{−exponent}`
    PowerLaw {
        exponent: f64,
        #[serde(default = "one")]
        coefficient: f64,
    },
    Gaussian {
        width: f64,
    },
    /// `−ln(M|t|) θ_s(1 − M|t|) sign(t)`
    LogStep {
        mass: f64,
        smoothing: f64,
    },
    Scaled {
        inner: Box<KernelSpec>,
        factor: f64,
    },
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel> {
        let k = match self {
            KernelSpec::Constant { value } => Kernel::Constant(*value),
            KernelSpec::PowerLaw { exponent, coefficient } => Kernel::PowerLaw {
                coefficient: *coefficient,
                exponent: *exponent,
            },
            KernelSpec::Gaussian { width } => Kernel::Gaussian { width: *width },
            KernelSpec::LogStep { mass, smoothing } => Kernel::LogStep {
                mass: *mass,
                smoothing: *smoothing,
            },
            KernelSpec::Scaled { inner, factor } => Kernel::Scaled {
                inner: Box::new(inner.build()?),
                factor: *factor,
            },
        };
        k.validate()?;
        Ok(k)
    }
}

impl From<&Kernel> for KernelSpec {
    fn from(k: &Kernel) -> Self {
        match k {
            Kernel::Constant(value) => KernelSpec::Constant { value: *value },
            Kernel::PowerLaw { coefficient, exponent } => KernelSpec::PowerLaw {
                exponent: *exponent,
                coefficient: *coefficient,
            },
            Kernel::Gaussian { width } => KernelSpec::Gaussian { width: *width },
            Kernel::LogStep { mass, smoothing } => KernelSpec::LogStep {
                mass: *mass,
                smoothing: *smoothing,
            },
            Kernel::Scaled { inner, factor } => KernelSpec::Scaled {
                inner: Box::new(KernelSpec::from(inner.as_ref())),
                factor: *factor,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmoothingSpec {
    #[default]
    Mollifier,
    SmoothedStep {
        width: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionSpec {
    #[serde(default = "dim_one")]
    pub dim: usize,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "one")]
    pub radius: f64,
    /// Polynomial in `t` (`n = 1`) or `r` (`n > 1`), lowest order first.
    #[serde(default = "TestFunctionSpec::unit_prefactor")]
    pub prefactor: Vec<f64>,
    #[serde(default)]
    pub smoothing: SmoothingSpec,
    #[serde(default = "one")]
    pub normalization: f64,
    /// Rescale so that `φ(0) = 1`, overriding `normalization`.
    #[serde(default)]
    pub normalize_at_origin: bool,
}

impl TestFunctionSpec {
    fn unit_prefactor() -> Vec<f64> {
        vec![1.0]
    }

    pub fn mollifier(dim: usize, center: f64, radius: f64) -> Self {
        Self {
            dim,
            center,
            radius,
            prefactor: vec![1.0],
            smoothing: SmoothingSpec::Mollifier,
            normalization: 1.0,
            normalize_at_origin: false,
        }
    }

    pub fn with_prefactor(mut self, prefactor: Vec<f64>) -> Self {
        self.prefactor = prefactor;
        self
    }

    pub fn at_origin(mut self) -> Self {
        self.normalize_at_origin = true;
        self
    }

    pub fn build(&self) -> Result<TestFunction> {
        let smoothing = match self.smoothing {
            SmoothingSpec::Mollifier => Smoothing::Mollifier,
            SmoothingSpec::SmoothedStep { width } => Smoothing::SmoothedStep { width },
        };
        let f = TestFunction::new(
            self.dim,
            self.center,
            self.radius,
            self.prefactor.clone(),
            smoothing,
            self.normalization,
        )?;
        if self.normalize_at_origin {
            f.normalized_at_origin()
        } else {
            Ok(f)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CutoffSpec {
    /// Mollifier of the given radius, scaled to `w(0) = 1`.
    Mollifier { radius: f64 },
    /// `θ_s(1 − M|x|)`
    SmoothedStep {
        mass: f64,
        #[serde(default = "CutoffSpec::default_width")]
        width: f64,
    },
}

impl CutoffSpec {
    fn default_width() -> f64 {
        1e-2
    }

    pub fn build(&self, dim: usize) -> Result<CutoffFunction> {
        match *self {
            CutoffSpec::Mollifier { radius } => CutoffFunction::mollifier(dim, radius),
            CutoffSpec::SmoothedStep { mass, width } => CutoffFunction::smoothed_step(dim, mass, width),
        }
    }
}

impl From<CutoffKind> for CutoffSpec {
    fn from(k: CutoffKind) -> Self {
        match k {
            CutoffKind::Mollifier { radius } => CutoffSpec::Mollifier { radius },
            CutoffKind::SmoothedStep { mass, width } => CutoffSpec::SmoothedStep { mass, width },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterterm {
    pub alpha: Vec<u32>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExtensionSpec {
    /// Taylor subtraction with cutoff `w` plus `Σ c_α ∂^α δ`.
    Renormalized {
        kernel: KernelSpec,
        #[serde(default = "dim_one")]
        dim: usize,
        omega: f64,
        cutoff: CutoffSpec,
        #[serde(default)]
        counterterms: Vec<Counterterm>,
    },
    /// `lim_{ε→0} T₀[c_ε φ]` for a punctured kernel with `sd < n`.
    LowSd {
        kernel: KernelSpec,
        #[serde(default = "dim_one")]
        dim: usize,
        sd: f64,
        #[serde(default = "ExtensionSpec::default_schedule")]
        schedule: Vec<f64>,
        #[serde(default = "ExtensionSpec::default_tolerance")]
        tolerance: f64,
    },
}

impl ExtensionSpec {
    fn default_schedule() -> Vec<f64> {
        geometric_schedule(0.1, 2.0, 10)
    }

    fn default_tolerance() -> f64 {
        1e-7
    }

    pub fn dim(&self) -> usize {
        match self {
            ExtensionSpec::Renormalized { dim, .. } | ExtensionSpec::LowSd { dim, .. } => *dim,
        }
    }

    pub fn build_renormalized(&self) -> Result<ExtendedDistribution> {
        match self {
            ExtensionSpec::Renormalized {
                kernel,
                dim,
                omega,
                cutoff,
                counterterms,
            } => {
                let mut map = BTreeMap::new();
                for c in counterterms {
                    if c.alpha.len() != *dim {
                        return Err(Error::DimensionMismatch {
                            distribution: *dim,
                            test_function: c.alpha.len(),
                        });
                    }
                    map.insert(MultiIndex::new(c.alpha.clone()), c.value);
                }
                extend_renormalized(kernel.build()?, *dim, *omega, cutoff.build(*dim)?, map)
            }
            ExtensionSpec::LowSd { .. } => Err(Error::Unsupported("not a renormalized extension".into())),
        }
    }

    /// Low-sd extensions certify convergence on construction, hence `cfg`.
    pub fn build(&self, cfg: &QuadratureConfig) -> Result<Distribution> {
        match self {
            ExtensionSpec::Renormalized { .. } => Ok(self.build_renormalized()?.into()),
            ExtensionSpec::LowSd {
                kernel,
                dim,
                sd,
                schedule,
                tolerance,
            } => {
                let t0 = Distribution::punctured(*dim, kernel.build()?)?;
                extend_low_sd(&t0, *sd, schedule, *tolerance, cfg)
            }
        }
    }
}

impl From<&ExtendedDistribution> for ExtensionSpec {
    fn from(e: &ExtendedDistribution) -> Self {
        ExtensionSpec::Renormalized {
            kernel: e.kernel().into(),
            dim: e.dim(),
            omega: e.omega(),
            cutoff: e.cutoff().kind().into(),
            counterterms: e
                .counterterms()
                .iter()
                .map(|(alpha, value)| Counterterm {
                    alpha: alpha.components().to_vec(),
                    value: *value,
                })
                .collect(),
        }
    }
}

impl From<&LowSdExtension> for ExtensionSpec {
    fn from(e: &LowSdExtension) -> Self {
        ExtensionSpec::LowSd {
            kernel: e.kernel().into(),
            dim: e.dim(),
            sd: e.sd(),
            schedule: e.schedule().to_vec(),
            tolerance: e.tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    Regular {
        #[serde(default = "dim_one")]
        dim: usize,
        kernel: KernelSpec,
        #[serde(default)]
        punctured: bool,
    },
    /// `c ∂^α δ`; `alpha` defaults to the zero multi-index in `dim`.
    Delta {
        #[serde(default = "dim_one")]
        dim: usize,
        #[serde(default)]
        alpha: Option<Vec<u32>>,
        #[serde(default = "one")]
        coefficient: f64,
    },
    Sum {
        terms: Vec<DistributionSpec>,
    },
    Derivative {
        of: Box<DistributionSpec>,
        alpha: Vec<u32>,
    },
    /// `f'` with the log-step kernel `f`, in one dimension.
    LogKernel {
        mass: f64,
        smoothing: f64,
    },
    Extension {
        extension: ExtensionSpec,
    },
}

impl DistributionSpec {
    pub fn build(&self, cfg: &QuadratureConfig) -> Result<Distribution> {
        match self {
            DistributionSpec::Regular { dim, kernel, punctured } => {
                let k = kernel.build()?;
                if *punctured {
                    Distribution::punctured(*dim, k)
                } else {
                    Distribution::regular(*dim, k)
                }
            }
            DistributionSpec::Delta { dim, alpha, coefficient } => {
                let alpha = match alpha {
                    Some(a) => MultiIndex::new(a.clone()),
                    None => MultiIndex::zeros(*dim),
                };
                if alpha.dim() != *dim {
                    return Err(Error::DimensionMismatch {
                        distribution: *dim,
                        test_function: alpha.dim(),
                    });
                }
                Distribution::delta_derivative(alpha, *coefficient)
            }
            DistributionSpec::Sum { terms } => {
                let parts = terms.iter().map(|t| t.build(cfg)).collect::<Result<Vec<_>>>()?;
                Distribution::sum(parts)
            }
            DistributionSpec::Derivative { of, alpha } => {
                Distribution::derivative(of.build(cfg)?, MultiIndex::new(alpha.clone()))
            }
            DistributionSpec::LogKernel { mass, smoothing } => log_kernel_form(*mass, *smoothing),
            DistributionSpec::Extension { extension } => extension.build(cfg),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DistributionSpec::Regular { dim, .. } | DistributionSpec::Delta { dim, .. } => *dim,
            DistributionSpec::Sum { terms } => terms.first().map_or(1, DistributionSpec::dim),
            DistributionSpec::Derivative { of, .. } => of.dim(),
            DistributionSpec::LogKernel { .. } => 1,
            DistributionSpec::Extension { extension } => extension.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_roundtrip_through_json() {
        let k = Kernel::power_law(6.0).scaled(0.5);
        let spec = KernelSpec::from(&k);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"type":"scaled","inner":{"type":"power_law","exponent":6.0,"coefficient":1.0},"factor":0.5}"#
        );
        let back: KernelSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), k);
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = serde_json::from_str::<KernelSpec>(r#"{"type":"gaussian","width":1,"height":2}"#).unwrap_err();
        assert!(err.to_string().contains("height"));
        assert!(serde_json::from_str::<TestFunctionSpec>(r#"{"radius":1,"colour":3}"#).is_err());
        assert!(serde_json::from_str::<KernelSpec>(r#"{"type":"cauchy"}"#).is_err());
    }

    #[test]
    fn test_function_defaults() {
        let spec: TestFunctionSpec = serde_json::from_str("{}").unwrap();
        assert_eq!(spec, TestFunctionSpec::mollifier(1, 0.0, 1.0));
        let f = TestFunctionSpec::mollifier(1, 0.0, 0.5).at_origin().build().unwrap();
        use divren_core::distribution::Probe;
        assert!((f.value(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extension_descriptor_roundtrip() {
        let text = r#"{"type":"renormalized","kernel":{"type":"power_law","exponent":6},"dim":4,"omega":2,
            "cutoff":{"type":"smoothed_step","mass":1},"counterterms":[{"alpha":[0,0,0,0],"value":0.5}]}"#;
        let spec: ExtensionSpec = serde_json::from_str(text).unwrap();
        let ext = spec.build_renormalized().unwrap();
        assert_eq!(ext.counterterms().len(), 1);
        assert_eq!(ExtensionSpec::from(&ext), spec);
    }

    #[test]
    fn distribution_dimensions_checked() {
        let cfg = QuadratureConfig::default();
        let bad: DistributionSpec = serde_json::from_str(r#"{"type":"delta","dim":4,"alpha":[1]}"#).unwrap();
        assert!(matches!(bad.build(&cfg), Err(Error::DimensionMismatch { .. })));
        let nonint: DistributionSpec =
            serde_json::from_str(r#"{"type":"regular","kernel":{"type":"power_law","exponent":1}}"#).unwrap();
        assert!(matches!(nonint.build(&cfg), Err(Error::NotLocallyIntegrable)));
    }
}
