use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::Error;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Sign rules tying `(F, F', mu)` to the operator pair and the partner
/// potentials.
///
/// | tag                 | lowering        | raising           | `V_-/V_+`             |
/// |---------------------|-----------------|-------------------|-----------------------|
/// | `PaperSec4`         | `mu d + iF`     | `-i mu d + F`     | `F^2 -/+ i mu F'`     |
/// | `Standard`          | `mu d + F`      | `-mu d + conj(F)` | `F^2 -/+ mu F'`       |
/// | `TransposeAdjoint`  | `mu d + F`      | `-mu d + F`       | `F^2 -/+ mu F'`       |
///
/// `Standard` pairs the lowering operator with its Hermitian adjoint;
/// `TransposeAdjoint` uses the formal transpose, which keeps the algebra
/// intact for complex `F`. The two coincide when `F` is real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    PaperSec4,
    Standard,
    TransposeAdjoint,
}

impl Convention {
    pub const ALL: [Convention; 3] = [Convention::PaperSec4, Convention::Standard, Convention::TransposeAdjoint];

    pub fn tag(&self) -> &'static str {
        match self {
            Convention::PaperSec4 => "PAPER_SEC4",
            Convention::Standard => "STANDARD",
            Convention::TransposeAdjoint => "TRANSPOSE_ADJOINT",
        }
    }

    /// Coefficient `k` in `V_-/+ = F^2 -/+ k mu F' + alpha0`.
    pub(crate) fn derivative_coefficient(&self) -> Complex64 {
        match self {
            Convention::PaperSec4 => I,
            Convention::Standard | Convention::TransposeAdjoint => ONE,
        }
    }

    /// `(V_-, V_+)` at one point.
    pub fn partner_values(&self, f: Complex64, df: Complex64, mu: f64, alpha0: Complex64) -> (Complex64, Complex64) {
        let k = self.derivative_coefficient() * mu * df;
        (f * f - k + alpha0, f * f + k + alpha0)
    }

    /// Coefficient multiplying `F` in the lowering operator.
    pub(crate) fn lowering_potential_factor(&self) -> Complex64 {
        match self {
            Convention::PaperSec4 => I,
            Convention::Standard | Convention::TransposeAdjoint => ONE,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" | "paper_sec4" => Ok(Convention::PaperSec4),
            "standard" => Ok(Convention::Standard),
            "transpose" | "transpose_adjoint" => Ok(Convention::TransposeAdjoint),
            other => Err(Error::InvalidParameter(format!("unknown convention '{other}'"))),
        }
    }
}
