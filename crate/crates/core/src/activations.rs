//! The fourteen activation functions, their analytic first derivatives, and
//! the positive-interval query that drives the hyperstrip geometry.
//!
//! The cone family is what makes this crate interesting:
//!
//! - `Cone`:              g(z) = 1 - |z - 1|
//! - `ParabolicCone`:     g(z) = z(2 - z)
//! - `ParameterizedCone`: g(z) = 1 - |z - 1|^beta, beta > 0
//!
//! All three are zero exactly at z = 0 and z = 2, peak at g(1) = 1, and are
//! strictly negative outside [0, 2]. A neuron using one of them therefore
//! fires positively on a strip of input space instead of a half-space.
//!
//! Kink conventions (the derivative at non-differentiable points):
//! Cone and ParameterizedCone return 0 at z = 1 (the stationarity-consistent
//! choice at a maximum); ReLU and LeakyReLU use their left values 0 and 0.01
//! at z = 0; SELU uses its right branch (lambda) at z = 0.

use crate::error::{Error, Result};

/// SELU scale constant, as printed in the definition table.
pub const SELU_LAMBDA: f64 = 1.0507;
/// SELU alpha constant, as printed in the definition table.
pub const SELU_ALPHA: f64 = 1.6733;

const LEAKY_SLOPE: f64 = 0.01;
const GELU_SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
const GELU_CUBIC: f64 = 0.044715;

/// Tagged activation function. `ParameterizedCone` carries its shape
/// exponent; everything else is parameter-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActivationKind {
    Cone,
    ParabolicCone,
    /// `beta` must be positive; construct via [`ActivationKind::parameterized_cone`]
    /// to have that checked.
    ParameterizedCone { beta: f64 },
    Sigmoid,
    Tanh,
    LiSHT,
    Softplus,
    ReLU,
    LeakyReLU,
    GELU,
    SELU,
    Mish,
    Swish,
    ELU,
}

/// CLI/CSV names of all fourteen kinds, in table order.
pub const VALID_NAMES: [&str; 14] = [
    "cone",
    "parabolic-cone",
    "parameterized-cone",
    "sigmoid",
    "tanh",
    "lisht",
    "softplus",
    "relu",
    "leaky-relu",
    "gelu",
    "selu",
    "mish",
    "swish",
    "elu",
];

impl ActivationKind {
    /// All fourteen kinds with default parameters (ParameterizedCone beta = 1).
    pub fn all() -> [ActivationKind; 14] {
        use ActivationKind::*;
        [
            Cone,
            ParabolicCone,
            ParameterizedCone { beta: 1.0 },
            Sigmoid,
            Tanh,
            LiSHT,
            Softplus,
            ReLU,
            LeakyReLU,
            GELU,
            SELU,
            Mish,
            Swish,
            ELU,
        ]
    }

    pub fn parameterized_cone(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "parameterized-cone exponent must be finite and positive, got {beta}"
            )));
        }
        Ok(ActivationKind::ParameterizedCone { beta })
    }

    /// Lower-case hyphenated name used on the command line and in CSV headers.
    pub fn name(&self) -> &'static str {
        use ActivationKind::*;
        match self {
            Cone => "cone",
            ParabolicCone => "parabolic-cone",
            ParameterizedCone { .. } => "parameterized-cone",
            Sigmoid => "sigmoid",
            Tanh => "tanh",
            LiSHT => "lisht",
            Softplus => "softplus",
            ReLU => "relu",
            LeakyReLU => "leaky-relu",
            GELU => "gelu",
            SELU => "selu",
            Mish => "mish",
            Swish => "swish",
            ELU => "elu",
        }
    }

    /// Human-facing label for result tables.
    pub fn label(&self) -> &'static str {
        use ActivationKind::*;
        match self {
            Cone => "Cone",
            ParabolicCone => "Parabolic-Cone",
            ParameterizedCone { .. } => "Parameterized-Cone",
            Sigmoid => "Sigmoid",
            Tanh => "Tanh",
            LiSHT => "LiSHT",
            Softplus => "Softplus",
            ReLU => "ReLU",
            LeakyReLU => "Leaky ReLU",
            GELU => "GELU",
            SELU => "SELU",
            Mish => "Mish",
            Swish => "Swish",
            ELU => "ELU",
        }
    }

    /// Parses a CLI name. `parameterized-cone` accepts an optional exponent
    /// suffix, e.g. `parameterized-cone:2.5` (default 1.0).
    pub fn from_name(name: &str) -> Result<Self> {
        use ActivationKind::*;
        let lower = name.trim().to_ascii_lowercase();
        if let Some(beta) = lower.strip_prefix("parameterized-cone:") {
            let beta: f64 = beta
                .parse()
                .map_err(|_| Error::UnknownActivation { name: name.into() })?;
            return Self::parameterized_cone(beta);
        }
        Ok(match lower.as_str() {
            "cone" => Cone,
            "parabolic-cone" => ParabolicCone,
            "parameterized-cone" => ParameterizedCone { beta: 1.0 },
            "sigmoid" => Sigmoid,
            "tanh" => Tanh,
            "lisht" => LiSHT,
            "softplus" => Softplus,
            "relu" => ReLU,
            "leaky-relu" => LeakyReLU,
            "gelu" => GELU,
            "selu" => SELU,
            "mish" => Mish,
            "swish" => Swish,
            "elu" => ELU,
            _ => return Err(Error::UnknownActivation { name: name.into() }),
        })
    }

    /// g(z). Rejects non-finite input.
    pub fn forward(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::NonFinite { what: "activation input", value: z });
        }
        Ok(self.value(z))
    }

    /// g'(z) with the documented kink conventions. Rejects non-finite input.
    pub fn derivative(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::NonFinite { what: "activation input", value: z });
        }
        Ok(self.slope(z))
    }

    /// The open interval on which g is strictly positive, when that set is a
    /// bounded interval. `(0, 2)` for the whole cone family (the zeros of
    /// 1 - |z-1|^beta are z = 0 and z = 2 for every beta > 0); `None` for all
    /// other kinds, whose positive sets are half-lines or all of R.
    pub fn positive_interval(&self) -> Option<(f64, f64)> {
        match self {
            ActivationKind::Cone
            | ActivationKind::ParabolicCone
            | ActivationKind::ParameterizedCone { .. } => Some((0.0, 2.0)),
            _ => None,
        }
    }

    /// Points where g is not differentiable. Gradient-check tests exclude a
    /// neighborhood of these.
    pub fn kinks(&self) -> &'static [f64] {
        use ActivationKind::*;
        match self {
            Cone | ParameterizedCone { .. } => &[1.0],
            ReLU | LeakyReLU | SELU => &[0.0],
            _ => &[],
        }
    }

    /// True for the cone family (strip-positive kinds).
    pub fn is_cone_family(&self) -> bool {
        self.positive_interval().is_some()
    }

    /// Unchecked forward map; caller guarantees `z` is finite.
    pub(crate) fn value(&self, z: f64) -> f64 {
        use ActivationKind::*;
        match self {
            Cone => 1.0 - (z - 1.0).abs(),
            ParabolicCone => z * (2.0 - z),
            ParameterizedCone { beta } => 1.0 - (z - 1.0).abs().powf(*beta),
            Sigmoid => sigmoid(z),
            Tanh => z.tanh(),
            LiSHT => z * z.tanh(),
            Softplus => softplus(z),
            ReLU => z.max(0.0),
            LeakyReLU => {
                if z < 0.0 {
                    LEAKY_SLOPE * z
                } else {
                    z
                }
            }
            GELU => 0.5 * z * (1.0 + gelu_inner(z).tanh()),
            SELU => {
                if z >= 0.0 {
                    SELU_LAMBDA * z
                } else {
                    SELU_LAMBDA * SELU_ALPHA * z.exp_m1()
                }
            }
            Mish => z * softplus(z).tanh(),
            Swish => z * sigmoid(z),
            ELU => {
                if z >= 0.0 {
                    z
                } else {
                    z.exp_m1()
                }
            }
        }
    }

    /// Unchecked derivative; caller guarantees `z` is finite.
    pub(crate) fn slope(&self, z: f64) -> f64 {
        use ActivationKind::*;
        match self {
            Cone => {
                if z == 1.0 {
                    0.0
                } else if z < 1.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            ParabolicCone => 2.0 - 2.0 * z,
            ParameterizedCone { beta } => {
                if z == 1.0 {
                    0.0
                } else {
                    let d = z - 1.0;
                    -beta * d.abs().powf(beta - 1.0) * d.signum()
                }
            }
            Sigmoid => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
            Tanh => 1.0 - z.tanh() * z.tanh(),
            LiSHT => {
                let t = z.tanh();
                t + z * (1.0 - t * t)
            }
            Softplus => sigmoid(z),
            ReLU => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            LeakyReLU => {
                if z > 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            GELU => {
                let t = gelu_inner(z).tanh();
                let inner_slope = GELU_SQRT_2_OVER_PI + 3.0 * GELU_CUBIC * z * z;
                0.5 * (1.0 + t) + 0.5 * z * (1.0 - t * t) * inner_slope
            }
            SELU => {
                if z >= 0.0 {
                    SELU_LAMBDA
                } else {
                    SELU_LAMBDA * SELU_ALPHA * z.exp()
                }
            }
            Mish => {
                let sp = softplus(z);
                let t = sp.tanh();
                t + z * (1.0 - t * t) * sigmoid(z)
            }
            Swish => {
                let s = sigmoid(z);
                s + z * s * (1.0 - s)
            }
            ELU => {
                if z >= 0.0 {
                    1.0
                } else {
                    z.exp()
                }
            }
        }
    }
}

/// Overflow-safe logistic function.
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^z), computed as z + ln(1 + e^-z) for z > 30 to avoid overflow.
fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Argument of the tanh in the printed GELU approximation:
/// sqrt(2/pi) * z + 0.044715 * z^3.
fn gelu_inner(z: f64) -> f64 {
    GELU_SQRT_2_OVER_PI * z + GELU_CUBIC * z * z * z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use ActivationKind::*;

    /// Central finite difference, the independent oracle for derivatives.
    fn central_diff(kind: ActivationKind, z: f64, h: f64) -> f64 {
        (kind.value(z + h) - kind.value(z - h)) / (2.0 * h)
    }

    /// Kinds exercised by the derivative sweep: the fourteen defaults plus
    /// smooth parameterized-cone exponents.
    fn sweep_kinds() -> Vec<ActivationKind> {
        let mut kinds = ActivationKind::all().to_vec();
        kinds.push(ParameterizedCone { beta: 2.0 });
        kinds.push(ParameterizedCone { beta: 3.0 });
        kinds
    }

    #[test]
    fn cone_table_points() {
        assert_eq!(Cone.forward(1.0).unwrap(), 1.0);
        assert_eq!(Cone.forward(0.0).unwrap(), 0.0);
        assert_eq!(Cone.forward(2.0).unwrap(), 0.0);
        assert_eq!(ParabolicCone.forward(3.0).unwrap(), -3.0);
        assert_eq!(ParabolicCone.forward(0.0).unwrap(), 0.0);
        assert_eq!(ParabolicCone.forward(2.0).unwrap(), 0.0);
        assert_eq!(ParabolicCone.forward(1.0).unwrap(), 1.0);
        assert_eq!(ReLU.forward(-5.0).unwrap(), 0.0);
        assert_eq!(Sigmoid.forward(0.0).unwrap(), 0.5);
        let pc2 = ActivationKind::parameterized_cone(2.0).unwrap();
        assert_eq!(pc2.forward(1.0).unwrap(), 1.0);
        assert_eq!(pc2.forward(0.0).unwrap(), 0.0);
        assert_eq!(pc2.forward(2.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_table_points() {
        assert_eq!(ParabolicCone.derivative(0.0).unwrap(), 2.0);
        assert_eq!(Cone.derivative(0.5).unwrap(), 1.0);
        assert_eq!(Cone.derivative(1.5).unwrap(), -1.0);
        assert_eq!(Cone.derivative(1.0).unwrap(), 0.0);
        assert_eq!(ReLU.derivative(0.0).unwrap(), 0.0);
        assert_eq!(LeakyReLU.derivative(0.0).unwrap(), 0.01);
        assert_eq!(SELU.derivative(0.0).unwrap(), SELU_LAMBDA);
    }

    #[test]
    fn swish_derivative_at_zero_matches_finite_difference_oracle() {
        let oracle = central_diff(Swish, 0.0, 1e-6);
        assert!((oracle - 0.5).abs() < 1e-9, "oracle said {oracle}");
        assert_eq!(Swish.derivative(0.0).unwrap(), 0.5);
    }

    #[test]
    fn cone_kink_is_flat_but_training_moves_off_it() {
        // Zero subgradient exactly at the peak...
        assert_eq!(Cone.derivative(1.0).unwrap(), 0.0);
        // ...while any offset, however small, restores the full +-1 slope,
        // which the finite-difference probe sees on either side.
        assert_eq!(Cone.derivative(1.0 - 1e-9).unwrap(), 1.0);
        assert_eq!(Cone.derivative(1.0 + 1e-9).unwrap(), -1.0);
        let left = central_diff(Cone, 0.9, 1e-5);
        let right = central_diff(Cone, 1.1, 1e-5);
        assert!((left - 1.0).abs() < 1e-9 && (right + 1.0).abs() < 1e-9);
    }

    #[test]
    fn parameterized_cone_derivative_formula_spot_checks() {
        // -beta * |z-1|^(beta-1) * sign(z-1), analytic values.
        let pc = ActivationKind::parameterized_cone(2.0).unwrap();
        assert_eq!(pc.derivative(1.5).unwrap(), -2.0 * 0.5);
        assert_eq!(pc.derivative(0.5).unwrap(), 2.0 * 0.5);
        assert_eq!(pc.derivative(1.0).unwrap(), 0.0);
        let cusp = ActivationKind::parameterized_cone(0.5).unwrap();
        // At |z-1| = 0.25: -0.5 * 0.25^(-0.5) = -1 on the right, +1 on the left.
        assert!((cusp.derivative(1.25).unwrap() + 1.0).abs() < 1e-12);
        assert!((cusp.derivative(0.75).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cusp.derivative(1.0).unwrap(), 0.0);
    }

    #[test]
    fn positive_interval_is_the_strip_for_cones_only() {
        assert_eq!(Cone.positive_interval(), Some((0.0, 2.0)));
        assert_eq!(ParabolicCone.positive_interval(), Some((0.0, 2.0)));
        let pc3 = ActivationKind::parameterized_cone(3.0).unwrap();
        assert_eq!(pc3.positive_interval(), Some((0.0, 2.0)));
        assert_eq!(ReLU.positive_interval(), None);
        assert_eq!(Sigmoid.positive_interval(), None);
        assert_eq!(Mish.positive_interval(), None);
    }

    #[test]
    fn non_finite_input_is_a_domain_error() {
        for kind in ActivationKind::all() {
            assert!(matches!(kind.forward(f64::NAN), Err(Error::NonFinite { .. })));
            assert!(matches!(
                kind.derivative(f64::INFINITY),
                Err(Error::NonFinite { .. })
            ));
        }
    }

    #[test]
    fn name_round_trip_and_unknown_name() {
        for kind in ActivationKind::all() {
            assert_eq!(ActivationKind::from_name(kind.name()).unwrap(), kind);
        }
        let pc = ActivationKind::from_name("parameterized-cone:2.5").unwrap();
        assert_eq!(pc, ParameterizedCone { beta: 2.5 });
        let err = ActivationKind::from_name("maxout").unwrap_err();
        assert!(err.to_string().contains("cone"), "{err}");
        assert!(ActivationKind::from_name("parameterized-cone:-1").is_err());
    }

    #[test]
    fn gradient_check_all_kinds() {
        // 100 uniform z in [-4, 4] per kind, away from kinks, h = 1e-5.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for kind in sweep_kinds() {
            let mut checked = 0;
            while checked < 100 {
                let z: f64 = rng.gen_range(-4.0..4.0);
                if kind.kinks().iter().any(|k| (z - k).abs() < 1e-3) {
                    continue;
                }
                checked += 1;
                let analytic = kind.derivative(z).unwrap();
                let numeric = central_diff(kind, z, 1e-5);
                let tol = 1e-6 * analytic.abs().max(1.0);
                assert!(
                    (analytic - numeric).abs() <= tol,
                    "{}: z={z} analytic={analytic} numeric={numeric}",
                    kind.name()
                );
            }
        }
    }

    #[test]
    fn cone_sign_structure_on_grid() {
        // forward > 0 iff z in (0,2); zero exactly at the endpoints.
        for kind in [Cone, ParabolicCone] {
            let n = 100_000;
            for i in 0..=n {
                let z = -5.0 + 10.0 * (i as f64) / (n as f64);
                let g = kind.value(z);
                if z == 0.0 || z == 2.0 {
                    assert_eq!(g, 0.0, "{} at {z}", kind.name());
                } else if z > 0.0 && z < 2.0 {
                    assert!(g > 0.0, "{} at {z} gave {g}", kind.name());
                } else {
                    assert!(g < 0.0, "{} at {z} gave {g}", kind.name());
                }
            }
        }
    }

    #[test]
    fn parabolic_cone_never_saturates() {
        // Derivative 2-2z: above 1 for z < 0.5, vanishing only at z = 1.
        let mut z = -6.0;
        while z <= 6.0 {
            let d = ParabolicCone.slope(z);
            if z < 0.5 {
                assert!(d > 1.0, "z={z} d={d}");
            }
            if (z - 1.0).abs() > 1e-12 {
                assert!(d.abs() > 0.0, "z={z}");
            }
            z += 1e-3;
        }
    }

    #[test]
    fn outputs_stay_inside_table_ranges() {
        // (lo, hi) straight from the Range column; approximate minima get
        // 1e-2 slack below.
        let cases: Vec<(ActivationKind, f64, f64)> = vec![
            (Cone, f64::NEG_INFINITY, 1.0),
            (ParabolicCone, f64::NEG_INFINITY, 1.0),
            (ParameterizedCone { beta: 2.0 }, f64::NEG_INFINITY, 1.0),
            (Sigmoid, 0.0, 1.0),
            (Tanh, -1.0, 1.0),
            (Softplus, 0.0, f64::INFINITY),
            (ReLU, 0.0, f64::INFINITY),
            (GELU, -0.5, f64::INFINITY),
            (SELU, -SELU_LAMBDA * SELU_ALPHA, f64::INFINITY),
            (Mish, -0.31, f64::INFINITY),
            (Swish, -0.5, f64::INFINITY),
            (ELU, -1.0, f64::INFINITY),
        ];
        for (kind, lo, hi) in cases {
            let mut z = -20.0;
            while z <= 20.0 {
                let g = kind.value(z);
                assert!(
                    g >= lo - 1e-2 && g <= hi + 1e-2,
                    "{} at z={z}: {g} outside [{lo}, {hi}]",
                    kind.name()
                );
                z += 0.01;
            }
        }
    }

    #[test]
    fn overflow_guards_hold_at_extremes() {
        for kind in ActivationKind::all() {
            for z in [-1e3, -30.0, 30.0, 1e3, 745.0, -745.0] {
                let g = kind.forward(z).unwrap();
                assert!(g.is_finite(), "{} at {z} gave {g}", kind.name());
                let d = kind.derivative(z).unwrap();
                assert!(d.is_finite(), "{}' at {z} gave {d}", kind.name());
            }
        }
    }

    proptest! {
        #[test]
        fn cone_positive_iff_in_strip(z in -50.0f64..50.0) {
            for kind in [Cone, ParabolicCone, ParameterizedCone { beta: 1.7 }] {
                let g = kind.value(z);
                prop_assert_eq!(g > 0.0, z > 0.0 && z < 2.0);
            }
        }
    }
}
