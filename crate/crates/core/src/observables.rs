//! Preferential flow direction, element discharges and energy rates.

use crate::darcy::FluidParams;
use crate::error::{Error, Result};
use crate::fields::{ElementField2, ElementField3};
use crate::lifting::StreamlineData;
use crate::mesh::{LiftedGeometry, Triangulation};
use crate::transport::{edge_fluxes, ExitTimes, Generator, JumpChain};
use crate::Vec3;

/// Metres per second to centimetres per second.
pub const CM_PER_M: f64 = 100.0;
/// Watts to erg per second.
pub const ERG_PER_J: f64 = 1e7;

/// Lifted-area weighted mean of `u`.
pub fn preferential_direction(u: &ElementField3, geo: &LiftedGeometry) -> Vec3 {
    let total = geo.total_area();
    u.0.iter()
        .zip(&geo.area3d)
        .fold(Vec3::zeros(), |acc, (uk, a)| acc + uk * *a)
        / total
}

/// `q_K = −D |K^ζ| Q_KK`, the volume flowing out of each triangle per unit
/// time.
pub fn discharge(q: &Generator, geo: &LiftedGeometry, depth: f64) -> Vec<f64> {
    geo.area3d
        .iter()
        .enumerate()
        .map(|(k, a)| -depth * a * q.diagonal(k))
        .collect()
}

/// `‖f_{K|L} ν̂_{K|L} − f_{L|K} ν̂_{L|K}‖²` for one side pair.
pub fn flux_deviation(f_kl: f64, nu_kl: &Vec3, f_lk: f64, nu_lk: &Vec3) -> f64 {
    (f_kl * nu_kl - f_lk * nu_lk).norm_squared()
}

/// Energy spent turning the flow from one lifted element into the next:
///
/// ```text
/// ½ ρ D Σ_K Σ_{L~K} (|K^ζ| Q̃_KL + |L^ζ| Q̃_LK) ‖f_{K|L} ν̂_{K|L} − f_{L|K} ν̂_{L|K}‖²
/// ```
///
/// over ordered pairs of neighbours, with `f` the normal flux of the master
/// field. The summand is symmetric, so each interface is visited once and
/// counted twice.
pub fn curvature_dissipation(
    v: &ElementField2,
    qt: &JumpChain,
    geo: &LiftedGeometry,
    t: &Triangulation,
    params: &FluidParams,
) -> Result<f64> {
    let flux = edge_fluxes(v, t);
    let mut sum = 0.0;
    for &e in t.interface_edges() {
        let edge = &t.edges()[e];
        let (k, l) = (edge.left, edge.right.unwrap());
        let (pkl, plk) = (qt.prob(k, l), qt.prob(l, k));
        if pkl * plk != 0.0 {
            return Err(Error::numeric(
                format!("triangles {k} and {l} exchange flow in both directions"),
                pkl.min(plk),
            ));
        }
        let weight = geo.area3d[k] * pkl + geo.area3d[l] * plk;
        if weight == 0.0 {
            continue;
        }
        let nu_k = geo.conormal[k][t.local_index(k, e).unwrap()];
        let nu_l = geo.conormal[l][t.local_index(l, e).unwrap()];
        sum += 2.0 * weight * flux_deviation(flux[e], &nu_k, -flux[e], &nu_l);
    }
    Ok(0.5 * params.rho * params.depth * sum)
}

/// `½ ρ γ Σ q_K (d_K / D) ‖u_K‖²`.
pub fn friction_dissipation(
    u: &ElementField3,
    q: &[f64],
    s: &StreamlineData,
    params: &FluidParams,
) -> f64 {
    let sum: f64 = (0..u.len())
        .map(|k| q[k] * s.d[k] / params.depth * u.0[k].norm_squared())
        .sum();
    0.5 * params.rho * params.gamma * sum
}

/// `½ ρ g Σ q_K α_K (u_K · k̂)`; negative when the flow loses height.
pub fn gravity_rate(u: &ElementField3, q: &[f64], s: &StreamlineData, params: &FluidParams) -> f64 {
    let sum: f64 = (0..u.len()).map(|k| q[k] * s.alpha[k] * u.0[k].z).sum();
    0.5 * params.rho * params.g * sum
}

/// How the per-element exit times are averaged in the report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitTimeMean {
    #[default]
    Unweighted,
    AreaWeighted,
}

/// Summary observables of one experiment, in SI units.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub m_u: Vec3,
    pub u_curv: f64,
    pub u_fric: f64,
    pub u_grav: f64,
    pub balance: f64,
    /// Infinite when some element never drains.
    pub mean_exit_time: f64,
    pub stranded: usize,
}

/// Everything [`build_report`] reads.
pub struct ReportInputs<'a> {
    pub t: &'a Triangulation,
    pub geo: &'a LiftedGeometry,
    pub v: &'a ElementField2,
    pub u: &'a ElementField3,
    pub generator: &'a Generator,
    pub jump_chain: &'a JumpChain,
    pub streamlines: &'a StreamlineData,
    pub exit_times: &'a ExitTimes,
    pub params: &'a FluidParams,
    pub mean: ExitTimeMean,
}

pub fn build_report(inp: &ReportInputs<'_>) -> Result<EnergyReport> {
    let q = discharge(inp.generator, inp.geo, inp.params.depth);
    let u_curv = curvature_dissipation(inp.v, inp.jump_chain, inp.geo, inp.t, inp.params)?;
    let u_fric = friction_dissipation(inp.u, &q, inp.streamlines, inp.params);
    let u_grav = gravity_rate(inp.u, &q, inp.streamlines, inp.params);
    let mean_exit_time = match inp.mean {
        ExitTimeMean::Unweighted => inp.exit_times.mean(),
        ExitTimeMean::AreaWeighted => inp.exit_times.weighted_mean(&inp.geo.area3d),
    };
    Ok(EnergyReport {
        m_u: preferential_direction(inp.u, inp.geo),
        u_curv,
        u_fric,
        u_grav,
        balance: u_curv + u_fric + u_grav,
        mean_exit_time,
        stranded: inp.exit_times.stranded.len(),
    })
}

impl EnergyReport {
    /// Velocity in cm/s and rates in erg/s, as reported.
    pub fn to_cgs(&self) -> EnergyReport {
        EnergyReport {
            m_u: self.m_u * CM_PER_M,
            u_curv: self.u_curv * ERG_PER_J,
            u_fric: self.u_fric * ERG_PER_J,
            u_grav: self.u_grav * ERG_PER_J,
            balance: self.balance * ERG_PER_J,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{lift_field, streamline_data};
    use crate::mesh::lift_geometry;
    use crate::transport::{expected_exit_times, generator, jump_chain};
    use crate::Vec2;

    fn single_triangle() -> (Triangulation, LiftedGeometry) {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let t = Triangulation::new(v, None).unwrap();
        let geo = lift_geometry(&t, &[0.0; 3]).unwrap();
        (t, geo)
    }

    #[test]
    fn uniform_and_cancelling_directions() {
        let (_, geo) = single_triangle();
        let m = preferential_direction(&ElementField3(vec![Vec3::x()]), &geo);
        assert_eq!(m, Vec3::x());

        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        let t = Triangulation::new(v, Some(&[[0, 1, 2], [0, 2, 3]])).unwrap();
        let geo = lift_geometry(&t, &[0.0; 4]).unwrap();
        let m = preferential_direction(&ElementField3(vec![Vec3::x(), -Vec3::x()]), &geo);
        assert_eq!(m, Vec3::zeros());
    }

    #[test]
    fn single_triangle_report() {
        let (t, geo) = single_triangle();
        let params = FluidParams { depth: 0.01, gamma: 0.03, rho: 100.0, g: 9.81, a: 1.0 };
        let v = ElementField2(vec![Vec2::new(1.0, 0.0)]);
        let u = lift_field(&v, &geo).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let qt = jump_chain(&q);
        let s = streamline_data(&v, &u, &t);
        let exit = expected_exit_times(&q).unwrap();

        let dis = discharge(&q, &geo, params.depth);
        assert!((dis[0] - 0.01).abs() < 1e-15);

        let report = build_report(&ReportInputs {
            t: &t,
            geo: &geo,
            v: &v,
            u: &u,
            generator: &q,
            jump_chain: &qt,
            streamlines: &s,
            exit_times: &exit,
            params: &params,
            mean: ExitTimeMean::Unweighted,
        })
        .unwrap();
        // ½ ρ γ q (d / D) ‖u‖² with q = 0.01, d = 1/2, ‖u‖ = 1
        let fric = 0.5 * 100.0 * 0.03 * 0.01 * (0.5 / 0.01) * 1.0;
        assert!((report.u_fric - fric).abs() < 1e-14);
        assert_eq!(report.u_curv, 0.0);
        assert_eq!(report.u_grav, 0.0);
        assert!((report.mean_exit_time - 0.5).abs() < 1e-15);
        assert_eq!(report.m_u, Vec3::x());
        assert_eq!(report.balance, report.u_fric);
    }

    #[test]
    fn right_angle_turn() {
        // unit flux leaving along ν̂ and arriving along ν̂ rotated by 90°
        let nu = Vec3::new(1.0, 0.0, 0.0);
        let turned = Vec3::new(0.0, 0.0, 1.0);
        // f_{K|L} = 1 and f_{L|K} = −1 with ν̂_{L|K} = −R ν̂: ‖ν̂ − R ν̂‖² = 2
        assert!((flux_deviation(1.0, &nu, -1.0, &-turned) - 2.0).abs() < 1e-15);
        assert_eq!(flux_deviation(1.0, &nu, -1.0, &-nu), 0.0);
    }

    #[test]
    fn zero_flow_has_no_energy() {
        let (t, geo) = single_triangle();
        let params = FluidParams::default();
        let v = ElementField2::zeros(1);
        let u = lift_field(&v, &geo).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let s = streamline_data(&v, &u, &t);
        let dis = discharge(&q, &geo, params.depth);
        assert_eq!(dis, vec![0.0]);
        assert_eq!(friction_dissipation(&u, &dis, &s, &params), 0.0);
        assert_eq!(gravity_rate(&u, &dis, &s, &params), 0.0);
        assert_eq!(curvature_dissipation(&v, &jump_chain(&q), &geo, &t, &params).unwrap(), 0.0);
        let exit = expected_exit_times(&q).unwrap();
        assert!(exit.mean().is_infinite());
    }

    #[test]
    fn downhill_flow_loses_height() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let t = Triangulation::new(v, None).unwrap();
        let heights: Vec<f64> = t.vertices().iter().map(|p| -p.x).collect();
        let geo = lift_geometry(&t, &heights).unwrap();
        let params = FluidParams::default();
        let v = ElementField2(vec![Vec2::new(1.0, 0.2)]);
        let u = lift_field(&v, &geo).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let s = streamline_data(&v, &u, &t);
        let dis = discharge(&q, &geo, params.depth);
        assert!(gravity_rate(&u, &dis, &s, &params) < 0.0);
        let f = friction_dissipation(&u, &dis, &s, &params);
        assert!(f > 0.0);
        let frictionless = FluidParams { gamma: 0.0, ..params };
        assert_eq!(friction_dissipation(&u, &dis, &s, &frictionless), 0.0);
    }
}
