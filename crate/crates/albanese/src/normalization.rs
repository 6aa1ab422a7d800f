//! The two connection normalizations threaded through transport and the
//! group coordinates.
//!
//! With residue coefficients `(k0, k1)` the connection form on the x-chart is
//!
//! ```text
//! omega = k0 (dx/x) N0 + k1 (dx/(1-x)) N1
//! ```
//!
//! `Scaled` uses `k0 = k1 = 1/(2 pi i)`, which makes the monodromies around 0
//! and 1 land exactly on `exp(N0)` and `exp(N1)`. `Group` uses `(1, -1)`,
//! i.e. `dt/t e0 + dt/(t-1) e1`, the convention in which the coordinate
//! factorization produces `u = log z` and `v_n = -li_n(z)` with rational
//! scale factors, so exact arithmetic can run through it.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `1/(2 pi i)`.
pub fn kappa() -> Complex64 {
    Complex64::new(0.0, -1.0 / (2.0 * PI))
}

/// `2 pi i`.
pub fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Residues scaled by `1/(2 pi i)` on both punctures.
    Scaled,
    /// Unscaled group convention `dt/t e0 + dt/(t-1) e1`.
    Group,
}

impl Normalization {
    /// Residue coefficient on the `dx/x` term.
    pub fn k0(self) -> Complex64 {
        match self {
            Normalization::Scaled => kappa(),
            Normalization::Group => Complex64::new(1.0, 0.0),
        }
    }

    /// Residue coefficient on the `dx/(1-x)` term.
    pub fn k1(self) -> Complex64 {
        match self {
            Normalization::Scaled => kappa(),
            Normalization::Group => Complex64::new(-1.0, 0.0),
        }
    }

    /// Scale on the order-k group coordinate: the transported matrix
    /// factors as `exp(sum_k v_k c_k nu_k) * exp(u k0 N0)` with
    /// `c_k = -k1 * k0^(k-1)`, and then `v_k = -li_k` along transport.
    pub fn coord_scale(self, k: u32) -> Complex64 {
        -self.k1() * self.k0().powu(k.saturating_sub(1))
    }

    pub fn label(self) -> &'static str {
        match self {
            Normalization::Scaled => "paper",
            Normalization::Group => "deligne",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" | "scaled" => Some(Normalization::Scaled),
            "deligne" | "group" => Some(Normalization::Group),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_is_inverse_of_two_pi_i() {
        let p = kappa() * two_pi_i();
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn group_coordinate_scales_are_rational() {
        let n = Normalization::Group;
        for k in 1..6 {
            assert_eq!(n.coord_scale(k), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn scaled_coordinate_scale_is_minus_kappa_powers() {
        let n = Normalization::Scaled;
        for k in 1u32..5 {
            let expect = -kappa().powu(k);
            assert!((n.coord_scale(k) - expect).norm() < 1e-16);
        }
    }
}
