//! Analytic test functions on randomly distorted unit cubes.
//!
//! Each function is defined on its usual native box and minimized there; the
//! evaluation interface maps a design in `[0, 1]^D` through a per-run
//! piecewise-linear distortion onto the native box and negates the result, so
//! every problem is a maximization with the distortion center `x0` mapped to
//! the center of the native box.

use std::f64::consts::{E, PI};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::Design;

/// A known global minimizer in native coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownOptimum {
    pub location: Vec<f64>,
    pub value: f64,
}

pub trait TestFunction: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// Native box, identical in every dimension.
    fn bounds(&self) -> (f64, f64);

    /// Value to be minimized at a native-domain point.
    fn native(&self, x: &[f64]) -> f64;

    /// Global minimum for `dim` dimensions, where one is known.
    fn optimum(&self, dim: usize) -> Option<KnownOptimum>;
}

macro_rules! unit_struct {
    ($($name:ident),*) => {$(
        #[derive(Debug, Clone, Copy, Default)]
        pub struct $name;
    )*};
}

unit_struct!(
    Ackley,
    Rastrigin,
    Rosenbrock,
    Sphere,
    Levy,
    Griewank,
    Schwefel,
    Zakharov,
    StyblinskiTang,
    Michalewicz
);

fn at(dim: usize, c: f64, value: f64) -> Option<KnownOptimum> {
    Some(KnownOptimum {
        location: vec![c; dim],
        value,
    })
}

impl TestFunction for Ackley {
    fn name(&self) -> &'static str {
        "ackley"
    }
    fn bounds(&self) -> (f64, f64) {
        (-32.768, 32.768)
    }
    fn native(&self, x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
        let cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
        -20.0 * (-0.2 * sq.sqrt()).exp() - cos.exp() + 20.0 + E
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 0.0, 0.0)
    }
}

impl TestFunction for Rastrigin {
    fn name(&self) -> &'static str {
        "rastrigin"
    }
    fn bounds(&self) -> (f64, f64) {
        (-5.12, 5.12)
    }
    fn native(&self, x: &[f64]) -> f64 {
        10.0 * x.len() as f64
            + x.iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
                .sum::<f64>()
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 0.0, 0.0)
    }
}

impl TestFunction for Rosenbrock {
    fn name(&self) -> &'static str {
        "rosenbrock"
    }
    fn bounds(&self) -> (f64, f64) {
        (-2.048, 2.048)
    }
    fn native(&self, x: &[f64]) -> f64 {
        x.windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum()
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 1.0, 0.0)
    }
}

impl TestFunction for Sphere {
    fn name(&self) -> &'static str {
        "sphere"
    }
    fn bounds(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
    fn native(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 0.0, 0.0)
    }
}

impl TestFunction for Levy {
    fn name(&self) -> &'static str {
        "levy"
    }
    fn bounds(&self) -> (f64, f64) {
        (-10.0, 10.0)
    }
    fn native(&self, x: &[f64]) -> f64 {
        let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
        let last = w[w.len() - 1];
        let head = (PI * w[0]).sin().powi(2);
        let body: f64 = w[..w.len() - 1]
            .iter()
            .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
            .sum();
        let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
        head + body + tail
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 1.0, 0.0)
    }
}

impl TestFunction for Griewank {
    fn name(&self) -> &'static str {
        "griewank"
    }
    fn bounds(&self) -> (f64, f64) {
        (-600.0, 600.0)
    }
    fn native(&self, x: &[f64]) -> f64 {
        let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
        let prod: f64 = x
            .iter()
            .enumerate()
            .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
            .product();
        sum - prod + 1.0
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 0.0, 0.0)
    }
}

/// Location of the Schwefel minimizer in each coordinate.
pub const SCHWEFEL_ARGMIN: f64 = 420.968_746_359_982;

impl TestFunction for Schwefel {
    fn name(&self) -> &'static str {
        "schwefel"
    }
    fn bounds(&self) -> (f64, f64) {
        (-500.0, 500.0)
    }
    fn native(&self, x: &[f64]) -> f64 {
        418.982_887_272_433_8 * x.len() as f64
            - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, SCHWEFEL_ARGMIN, 0.0)
    }
}

impl TestFunction for Zakharov {
    fn name(&self) -> &'static str {
        "zakharov"
    }
    fn bounds(&self) -> (f64, f64) {
        (-5.0, 10.0)
    }
    fn native(&self, x: &[f64]) -> f64 {
        let sq: f64 = x.iter().map(|v| v * v).sum();
        let lin: f64 = x
            .iter()
            .enumerate()
            .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
            .sum();
        sq + lin.powi(2) + lin.powi(4)
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        at(dim, 0.0, 0.0)
    }
}

/// Per-coordinate minimizer of Styblinski-Tang.
pub const STYBLINSKI_TANG_ARGMIN: f64 = -2.903_534_027_771_177_6;

impl TestFunction for StyblinskiTang {
    fn name(&self) -> &'static str {
        "styblinski-tang"
    }
    fn bounds(&self) -> (f64, f64) {
        (-5.0, 5.0)
    }
    fn native(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v)
            .sum::<f64>()
    }
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        let t = STYBLINSKI_TANG_ARGMIN;
        let per = 0.5 * (t.powi(4) - 16.0 * t * t + 5.0 * t);
        at(dim, t, per * dim as f64)
    }
}

impl TestFunction for Michalewicz {
    fn name(&self) -> &'static str {
        "michalewicz"
    }
    fn bounds(&self) -> (f64, f64) {
        (0.0, PI)
    }
    fn native(&self, x: &[f64]) -> f64 {
        -x.iter()
            .enumerate()
            .map(|(i, v)| v.sin() * ((i + 1) as f64 * v * v / PI).sin().powi(20))
            .sum::<f64>()
    }
    /// Only the two-dimensional minimizer is known in closed coordinates.
    fn optimum(&self, dim: usize) -> Option<KnownOptimum> {
        (dim == 2).then(|| KnownOptimum {
            location: vec![2.202_905_527_378_98, PI / 2.0],
            value: -1.801_303_410_098_554,
        })
    }
}

/// All shipped functions, in registry order.
pub fn registry() -> Vec<Box<dyn TestFunction>> {
    vec![
        Box::new(Ackley),
        Box::new(Rastrigin),
        Box::new(Rosenbrock),
        Box::new(Sphere),
        Box::new(Levy),
        Box::new(Griewank),
        Box::new(Schwefel),
        Box::new(Zakharov),
        Box::new(StyblinskiTang),
        Box::new(Michalewicz),
    ]
}

pub fn function_names() -> Vec<&'static str> {
    registry().iter().map(|f| f.name()).collect()
}

pub fn function_by_name(name: &str) -> Result<Box<dyn TestFunction>> {
    registry()
        .into_iter()
        .find(|f| f.name() == name.trim().to_ascii_lowercase())
        .ok_or_else(|| Error::UnknownFunction {
            name: name.to_string(),
            supported: function_names().join(", "),
        })
}

/// Which lower-branch formula the distortion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistortionMode {
    /// `(x - x0) / x0` below the center; keeps `0 -> -1`.
    #[default]
    Corrected,
    /// `(x - x0) / (1 + x0)` below the center, as literally printed. The
    /// lower edge then maps to `-x0 / (1 + x0)` rather than `-1`.
    PaperLiteral,
}

impl DistortionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DistortionMode::Corrected => "corrected",
            DistortionMode::PaperLiteral => "paper-literal",
        }
    }
}

impl std::str::FromStr for DistortionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "corrected" => Ok(DistortionMode::Corrected),
            "paper-literal" => Ok(DistortionMode::PaperLiteral),
            other => Err(Error::invalid(
                "distortion_mode",
                format!("`{other}` is not one of: corrected, paper-literal"),
            )),
        }
    }
}

/// Per-run random relocation of the cube center.
#[derive(Debug, Clone, PartialEq)]
pub struct Distortion {
    x0: Vec<f64>,
    mode: DistortionMode,
}

impl Distortion {
    pub fn new(x0: Vec<f64>, mode: DistortionMode) -> Result<Self> {
        if x0.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if let Some((index, &value)) = x0
            .iter()
            .enumerate()
            .find(|(_, c)| !(**c > 0.0 && **c < 1.0))
        {
            return Err(Error::invalid(
                "x0",
                format!("coordinate {index} is {value}, must lie strictly inside (0, 1)"),
            ));
        }
        Ok(Distortion { x0, mode })
    }

    /// Center drawn uniformly from the open cube.
    pub fn random(dimension: usize, mode: DistortionMode, rng: &mut RngStream) -> Result<Self> {
        let x0 = (0..dimension)
            .map(|_| loop {
                let c: f64 = rng.random();
                if c > 0.0 {
                    break c;
                }
            })
            .collect();
        Distortion::new(x0, mode)
    }

    /// No-op center.
    pub fn centered(dimension: usize) -> Self {
        Distortion {
            x0: vec![0.5; dimension],
            mode: DistortionMode::Corrected,
        }
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn mode(&self) -> DistortionMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// Maps each coordinate into `[-1, 1]` with `x0 -> 0` and `1 -> 1`.
    pub fn distort(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.x0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x0.len(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.x0)
            .map(|(&c, &x0)| {
                if c >= x0 {
                    (c - x0) / (1.0 - x0)
                } else {
                    match self.mode {
                        DistortionMode::Corrected => (c - x0) / x0,
                        DistortionMode::PaperLiteral => (c - x0) / (1.0 + x0),
                    }
                }
            })
            .collect())
    }
}

/// Affine map from `[-1, 1]` onto `[lo, hi]`.
pub fn to_native(u: f64, (lo, hi): (f64, f64)) -> f64 {
    lo + (u + 1.0) / 2.0 * (hi - lo)
}

/// Maximization-oriented value of `f` at a design of the distorted cube.
pub fn evaluate(f: &dyn TestFunction, dist: &Distortion, x: &Design) -> Result<f64> {
    let bounds = f.bounds();
    let native: Vec<f64> = dist
        .distort(x.coords())?
        .into_iter()
        .map(|u| to_native(u, bounds))
        .collect();
    Ok(-f.native(&native))
}
