//! Physical and model parameter records. Units are hbar = c = 1 throughout.

use crate::error::{Error, Result};

/// Constant mass `M`, inverse mass `mu = 1/M` and the Dirac energy `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    mu: f64,
    mass: f64,
    epsilon: f64,
}

impl PhysicalConfig {
    pub fn new(mass: f64, epsilon: f64) -> Result<Self> {
        if mass == 0.0 {
            return Err(Error::Massless);
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be > 0, got {mass}")));
        }
        if !epsilon.is_finite() {
            return Err(Error::InvalidParameter("epsilon must be finite".into()));
        }
        Ok(Self {
            mu: 1.0 / mass,
            mass,
            epsilon,
        })
    }

    pub fn from_mu(mu: f64, epsilon: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be > 0, got {mu}")));
        }
        Self::new(1.0 / mu, epsilon)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Deformed Woods-Saxon parameter set.
///
/// `V(x) = -V0 e^{-t/a} / (1 + q e^{-t/a}) + c e^{-2t/a} / (1 + q e^{-t/a})^2`
/// with `t = x - X0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwsParams {
    pub v0: f64,
    pub a: f64,
    pub q: f64,
    pub x0: f64,
    pub c: f64,
    pub a0: f64,
}

impl DwsParams {
    pub fn new(v0: f64, a: f64, q: f64, x0: f64, c: f64, a0: f64) -> Result<Self> {
        let p = Self {
            v0,
            a,
            q,
            x0,
            c,
            a0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Nuclear parameterization: `X0 = 1.25 A0^{1/3}`, `V0 = 40.5 + 0.13 A0`.
    pub fn nuclear(a0: f64, a: f64, q: f64, c: f64) -> Result<Self> {
        Self::new(
            Self::default_depth(a0),
            a,
            q,
            Self::default_radius(a0),
            c,
            a0,
        )
    }

    /// The `A0 = 40`, `a = 0.65`, `q = 1`, `c = 0` reference set.
    pub fn reference() -> Self {
        Self::nuclear(40.0, 0.65, 1.0, 0.0).expect("reference parameters are valid")
    }

    pub fn default_radius(a0: f64) -> f64 {
        1.25 * a0.cbrt()
    }

    pub fn default_depth(a0: f64) -> f64 {
        40.5 + 0.13 * a0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.v0, self.a, self.q, self.x0, self.c, self.a0]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("DWS parameters must be finite".into()));
        }
        if self.a <= 0.0 {
            return Err(Error::InvalidParameter(format!("diffuseness a must be > 0, got {}", self.a)));
        }
        if self.q <= 0.0 {
            return Err(Error::InvalidParameter(format!("deformation q must be > 0, got {}", self.q)));
        }
        if self.x0 <= 0.0 {
            return Err(Error::InvalidParameter(format!("radius X0 must be > 0, got {}", self.x0)));
        }
        Ok(())
    }

    /// Decay rate `alpha = 1/a`.
    pub fn alpha(&self) -> f64 {
        1.0 / self.a
    }

    /// The combination `-V0 + c/q` that recurs in the matching solution.
    pub fn depth_term(&self) -> f64 {
        -self.v0 + self.c / self.q
    }

    /// Default evaluation window `[max(0, X0 - 10a), X0 + 25a]`.
    pub fn default_window(&self) -> (f64, f64) {
        ((self.x0 - 10.0 * self.a).max(0.0), self.x0 + 25.0 * self.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_times_mass_is_one() {
        for m in [0.3, 1.0, 938.272, 1e-3] {
            let cfg = PhysicalConfig::new(m, 0.5).unwrap();
            assert!((cfg.mu() * cfg.mass() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn massless_rejected() {
        assert_eq!(PhysicalConfig::new(0.0, 1.0), Err(Error::Massless));
        assert!(PhysicalConfig::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn reference_set() {
        let p = DwsParams::reference();
        assert!((p.v0 - 45.7).abs() < 1e-12);
        assert!((p.x0 - 4.274_939_866_691_742).abs() < 1e-9);
        assert!((p.alpha() - 1.0 / 0.65).abs() < 1e-15);
        let (lo, hi) = p.default_window();
        assert_eq!(lo, 0.0);
        assert!((hi - (p.x0 + 16.25)).abs() < 1e-12);
    }

    #[test]
    fn invalid_dws() {
        assert!(DwsParams::new(45.0, 0.0, 1.0, 4.0, 0.0, 40.0).is_err());
        assert!(DwsParams::new(45.0, 0.5, -1.0, 4.0, 0.0, 40.0).is_err());
        assert!(DwsParams::new(45.0, 0.5, 1.0, 0.0, 0.0, 40.0).is_err());
    }
}
