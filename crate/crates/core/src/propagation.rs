//! Large-time packet evolution by stationary phase.
//!
//! After a time τ = t − T₀ the packet spreads with γ_T = |τ|/E across its
//! momentum and γ_L = m²|τ|/E³ along it (fm², ħc restored). A massless
//! packet keeps its longitudinal shape.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::packets::{Dispersion, WavePacket};
use crate::units::HBAR_C;
use crate::vec3::Vec3;

/// Far-field ratio γ_T/σ from which [`evaluate_far_field`] is used.
pub const FAR_FIELD_RATIO: f64 = 3.0;

/// Packet geometry at a given time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadState {
    /// m²|τ|/E³ in fm².
    pub gamma_l: f64,
    /// |τ|/E in fm².
    pub gamma_t: f64,
    /// X₀ + τP₀/E.
    pub center: Vec3,
    /// −(m²/E)τ at the center (rad).
    pub phase0: f64,
    /// max(√σ, γ_L/√σ), or √σ for a massless packet (fm).
    pub longitudinal_width: f64,
    /// max(√σ, γ_T/√σ) (fm).
    pub transverse_width: f64,
}

/// Energy entering the spreading parameters: E(P₀), or m for the
/// nonrelativistic kind.
fn spreading_energy(packet: &WavePacket) -> Result<f64> {
    let e = match packet.dispersion() {
        Dispersion::NonRelativistic => packet.mass(),
        _ => packet.energy(),
    };
    if !(e > 0.0) {
        return domain("a massless packet needs nonzero momentum to spread");
    }
    Ok(e)
}

pub fn spread_state(packet: &WavePacket, t: f64) -> Result<SpreadState> {
    let e = spreading_energy(packet)?;
    let tau = t - packet.reference_time();
    let m = packet.mass();
    let gamma_t = tau.abs() * HBAR_C / e;
    let gamma_l = if m == 0.0 { 0.0 } else { (m / e).powi(2) * gamma_t };
    let root = packet.sigma().sqrt();
    let center = packet.position() + packet.velocity() * tau;
    let longitudinal_width = if m == 0.0 { root } else { root.max(gamma_l / root) };
    Ok(SpreadState {
        gamma_l,
        gamma_t,
        center,
        phase0: -(m * m / e) * tau / HBAR_C,
        longitudinal_width,
        transverse_width: root.max(gamma_t / root),
    })
}

/// True once γ_T/σ reaches [`FAR_FIELD_RATIO`].
pub fn is_far_field(packet: &WavePacket, t: f64) -> bool {
    spread_state(packet, t)
        .map(|s| s.gamma_t / packet.sigma() >= FAR_FIELD_RATIO)
        .unwrap_or(false)
}

/// Stationary momentum P_X = m(x−X₀)/√(τ² − (x−X₀)²) in MeV.
pub fn stationary_momentum(x: Vec3, packet: &WavePacket, t: f64) -> Result<Vec3> {
    if packet.dispersion() != Dispersion::Relativistic || packet.mass() <= 0.0 {
        return domain("stationary momentum needs a massive relativistic packet");
    }
    let r = x - packet.position();
    let tau = t - packet.reference_time();
    let interval = tau * tau - r.norm2();
    if !(interval > 0.0) {
        return domain("point lies outside the light cone of the packet origin");
    }
    Ok(r * (packet.mass() / interval.sqrt()))
}

/// Rates at which the effective widths grow (units of c).
///
/// Massless: v_l = 0, v_t = √(2/σ)/E. Massive: the slopes of γ_L/√σ and
/// γ_T/√σ, i.e. m²/(E³√σ) and 1/(E√σ).
pub fn spread_velocities(packet: &WavePacket) -> Result<(f64, f64)> {
    let e = spreading_energy(packet)?;
    let root = packet.sigma().sqrt();
    if packet.mass() == 0.0 {
        return Ok((0.0, (2.0 / packet.sigma()).sqrt() * HBAR_C / e));
    }
    let v_t = HBAR_C / (e * root);
    Ok(((packet.mass() / e).powi(2) * v_t, v_t))
}

/// Far-field amplitude
/// N₃(1+iγ_L/σ)^(−1/2)(1+iγ_T/σ)^(−1)·exp(−σ/2·(d_T²/γ_T² + d_L²/γ_L²) + iφ₀),
/// with d measured from the moving center and split along P̂₀.
///
/// For m = 0 the longitudinal factor is the initial profile exp(−d_L²/2σ)
/// and the phase is the plane-wave phase P₀·(x−X₀) − Eτ. For m > 0 the
/// phase is −(m²/E(P_X))τ with P_X the stationary momentum at x, falling
/// back to P₀ outside the light cone.
pub fn evaluate_far_field(packet: &WavePacket, x: Vec3, t: f64) -> Result<Complex64> {
    if packet.dispersion() == Dispersion::NonRelativistic {
        return domain("far-field form needs relativistic or massless dispersion");
    }
    let s = spread_state(packet, t)?;
    let sigma = packet.sigma();
    let tau = t - packet.reference_time();
    let n_l = packet.momentum().unit().unwrap_or(Vec3::Z);
    let d = x - s.center;
    let d_l = d.dot(n_l);
    let d_t2 = (d.norm2() - d_l * d_l).max(0.0);
    let one = Complex64::new(1.0, 0.0);
    let pref_t = one / Complex64::new(1.0, s.gamma_t / sigma);
    let pref_l = (one / Complex64::new(1.0, s.gamma_l / sigma)).sqrt();
    let transverse = if s.gamma_t > 0.0 {
        -0.5 * sigma * d_t2 / (s.gamma_t * s.gamma_t)
    } else {
        -d_t2 / (2.0 * sigma)
    };
    let (longitudinal, phase) = if packet.mass() == 0.0 {
        let r = x - packet.position();
        (
            -d_l * d_l / (2.0 * sigma),
            packet.wavenumber().dot(r) - packet.energy() / HBAR_C * tau,
        )
    } else {
        let m = packet.mass();
        let e_x = match stationary_momentum(x, packet, t) {
            Ok(p) => p.norm().hypot(m),
            Err(_) => packet.energy(),
        };
        let long = if s.gamma_l > 0.0 {
            -0.5 * sigma * d_l * d_l / (s.gamma_l * s.gamma_l)
        } else {
            -d_l * d_l / (2.0 * sigma)
        };
        (long, -(m * m / e_x) * tau / HBAR_C)
    };
    Ok(pref_l * pref_t * packet.normalization() * Complex64::from_polar((transverse + longitudinal).exp(), phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::norm_oracle;

    fn packet(m: f64, p: Vec3, sigma: f64) -> WavePacket {
        let kind = if m == 0.0 { Dispersion::Massless } else { Dispersion::Relativistic };
        WavePacket::new(p, Vec3::new(1.0, -2.0, 0.5), 0.0, sigma, m, kind).unwrap()
    }

    #[test]
    fn massless_has_no_longitudinal_spreading() {
        let g = packet(0.0, Vec3::Z * 2.0, 1.0);
        let s = spread_state(&g, 1e4).unwrap();
        assert_eq!(s.gamma_l, 0.0);
        assert!((s.gamma_t - 1e4 * HBAR_C / 2.0).abs() < 1e-6);
        assert_eq!(spread_velocities(&g).unwrap().0, 0.0);
    }

    #[test]
    fn width_ratio_identity() {
        let m = 10.0;
        let p = packet(m, Vec3::Y * m, 2.0);
        let s = spread_state(&p, 1234.5).unwrap();
        assert!((s.gamma_l / s.gamma_t - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rest_spreading_rates_coincide() {
        let m = 5.0;
        let p = packet(m, Vec3::ZERO, 4.0);
        let (vl, vt) = spread_velocities(&p).unwrap();
        assert!((vl - vt).abs() < 1e-15);
        assert!((vt - HBAR_C / (2.0 * m)).abs() < 1e-12);
    }

    #[test]
    fn massless_transverse_rate_scales_inverse_root_sigma() {
        let a = spread_velocities(&packet(0.0, Vec3::Z, 1.0)).unwrap().1;
        let b = spread_velocities(&packet(0.0, Vec3::Z, 2.0)).unwrap().1;
        assert!((a / b - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn massless_at_rest_is_rejected() {
        assert!(spread_state(&packet(0.0, Vec3::ZERO, 1.0), 1.0).is_err());
    }

    #[test]
    fn stationary_momentum_cases() {
        let m = 3.0;
        let p = packet(m, Vec3::Z * 4.0, 1.0);
        let t = 1e3;
        let at_origin = stationary_momentum(p.position(), &p, t).unwrap();
        assert_eq!(at_origin, Vec3::ZERO);
        let x = p.position() + p.velocity() * t;
        let px = stationary_momentum(x, &p, t).unwrap();
        assert!((px - p.momentum()).norm() < 1e-12);
        let near = p.position() + Vec3::Z * (t * (1.0 - 1e-9));
        assert!(stationary_momentum(near, &p, t).unwrap().norm() > 1e4);
        assert!(stationary_momentum(p.position() + Vec3::X * 2e3, &p, t).is_err());
    }

    #[test]
    fn center_modulus_and_transverse_falloff() {
        let p = packet(2.0, Vec3::Z * 3.0, 1.5);
        let t = 500.0;
        let s = spread_state(&p, t).unwrap();
        let sig = p.sigma();
        let c = evaluate_far_field(&p, s.center, t).unwrap().norm();
        let want = p.normalization()
            * (1.0 + (s.gamma_l / sig).powi(2)).powf(-0.25)
            * (1.0 + (s.gamma_t / sig).powi(2)).powf(-0.5);
        assert!((c / want - 1.0).abs() < 1e-13);
        let off = evaluate_far_field(&p, s.center + Vec3::X * (s.gamma_t / sig.sqrt()), t)
            .unwrap()
            .norm();
        assert!((off / c - (-0.5f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn far_field_norm() {
        // Normalization holds up to (γ/σ)-suppressed terms, so use γ/σ ≥ 300.
        for (m, p, t) in [(0.0, 3.0, 1e4), (1.0, 1.0, 3e4), (0.5, 2.0, 5e5)] {
            let pk = packet(m, Vec3::new(0.0, 0.6, 0.8) * p, 1.0);
            let s = spread_state(&pk, t).unwrap();
            if m > 0.0 {
                assert!(s.gamma_l / pk.sigma() >= 300.0);
            }
            let axes = Vec3::frame(pk.momentum());
            let root = pk.sigma().sqrt();
            let wl = if m == 0.0 { root } else { s.gamma_l / root };
            let wt = s.gamma_t / root;
            let n = norm_oracle(
                |x| evaluate_far_field(&pk, x, t).unwrap(),
                s.center,
                axes,
                [wt, wt, wl],
            )
            .unwrap();
            assert!((n - 1.0).abs() < 1e-4, "m={m}: norm {n}");
        }
    }

    #[test]
    fn near_and_far_forms_match_at_crossover() {
        // The far-field prefactor is the exact center amplitude; the rigid
        // near-field form agrees to 5% while γ_T/σ ≤ 0.3.
        let p = packet(1.0, Vec3::Z * 50.0, 2.0);
        let t = 0.3 * p.sigma() * p.energy() / HBAR_C;
        let s = spread_state(&p, t).unwrap();
        assert!((s.gamma_t / p.sigma() - 0.3).abs() < 1e-12);
        let far = evaluate_far_field(&p, s.center, t).unwrap().norm();
        let near = p.evaluate(p.center(t), t).norm();
        assert!((far / near - 1.0).abs() < 0.05);
        let t1 = p.sigma() * p.energy() / HBAR_C;
        let w = spread_state(&p, t1).unwrap().transverse_width;
        assert!((w - p.sigma().sqrt()).abs() < 1e-12);
    }

    #[test]
    fn frequency_recovery() {
        let m = 1.0;
        let p = WavePacket::new(Vec3::Z * m, Vec3::ZERO, 0.0, 1e8, m, Dispersion::Relativistic).unwrap();
        let e = p.energy();
        let tc = 2e7;
        let x = p.center(tc);
        let s = spread_state(&p, tc).unwrap();
        assert!(s.gamma_l / p.sigma() > 3.0);
        let dt = s.longitudinal_width / p.velocity().norm();
        let (t0, t1, n) = (tc - 5.0 * dt, tc + 5.0 * dt, 1 << 15);
        let h = (t1 - t0) / n as f64;
        let samples: Vec<(f64, Complex64)> = (0..n)
            .map(|i| {
                let t = t0 + h * i as f64;
                (t, evaluate_far_field(&p, x, t).unwrap())
            })
            .collect();
        let power = |w: f64| {
            samples
                .iter()
                .map(|&(t, z)| z * Complex64::from_polar(1.0, w * t))
                .sum::<Complex64>()
                .norm_sqr()
        };
        let w0 = e / HBAR_C;
        let grid: Vec<f64> = (0..801).map(|i| w0 * (0.8 + 0.4 * i as f64 / 800.0)).collect();
        let peak = grid
            .iter()
            .copied()
            .max_by(|a, b| power(*a).total_cmp(&power(*b)))
            .unwrap();
        let spectral_width = p.velocity().norm() / p.sigma().sqrt();
        assert!(
            (peak - w0).abs() < spectral_width,
            "peak {peak} vs {w0}, width {spectral_width}"
        );
    }

    #[test]
    fn spread_inputs_outside_far_field_still_report_widths() {
        let p = packet(1.0, Vec3::Z, 1.0);
        assert!(!is_far_field(&p, 0.0));
        let s = spread_state(&p, 0.0).unwrap();
        assert_eq!(s.longitudinal_width, 1.0);
        assert_eq!(s.transverse_width, 1.0);
        assert!(is_far_field(&p, 1e4));
    }

    proptest::proptest! {
        #[test]
        fn gamma_t_monotone_and_ratio(m in 0.0f64..1e3, p in 1e-3f64..1e4, t1 in 0.0f64..1e6, dt in 1e-3f64..1e6) {
            let pk = packet(m, Vec3::Z * p, 1.0);
            let a = spread_state(&pk, t1).unwrap();
            let b = spread_state(&pk, t1 + dt).unwrap();
            proptest::prop_assert!(b.gamma_t > a.gamma_t);
            proptest::prop_assert!(a.gamma_t >= a.gamma_l && a.gamma_l >= 0.0);
            if a.gamma_t > 0.0 {
                let want = (m / pk.energy()).powi(2);
                proptest::prop_assert!((a.gamma_l / a.gamma_t - want).abs() <= 1e-12 * want.max(1e-300));
            }
            let shift = b.center - a.center - pk.momentum() * (dt / pk.energy());
            proptest::prop_assert!(shift.norm() <= 1e-9 * (1.0 + b.center.norm()));
        }
    }
}
