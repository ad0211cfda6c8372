//! Property tests of the structural invariants of every stage.

mod common;

use common::*;
use fissure::darcy::{primary_field, solve_pressure, FluidParams};
use fissure::fields::{
    conservation_residual, gradient_p1, numb, unnumb, ElementField2, NodalScalarField,
};
use fissure::lifting::{lift_field, lifted_conservation_residual, lifting_matrix, mean_streamline, streamline_data};
use fissure::mesh::{lift_geometry, EdgeKind, Triangulation};
use fissure::observables::{curvature_dissipation, discharge, friction_dissipation, gravity_rate, preferential_direction};
use fissure::presets::log_well;
use fissure::projection::{characterizing_matrix, project_conservative};
use fissure::transport::{
    assert_forest, evolve_mass, exit_time_distribution, flow_graph, generator, jump_chain, transition,
};
use fissure::{Vec2, Vec3};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn mesh_edges_and_areas(count in 4usize..80, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let hull: f64 = (0..t.n_triangles()).map(|k| t.area(k)).sum();
        prop_assert!((hull - 1.0).abs() <= 1e-12);
        for k in 0..t.n_triangles() {
            prop_assert!(t.area(k) > 0.0);
        }
        for (e, edge) in t.edges().iter().enumerate() {
            prop_assert!((edge.nu.norm() - 1.0).abs() <= 1e-15);
            let [a, b] = edge.endpoints;
            prop_assert_eq!(edge.length, (t.vertices()[b] - t.vertices()[a]).norm());
            match edge.right {
                Some(l) => {
                    prop_assert_eq!(edge.kind, EdgeKind::Interface);
                    prop_assert_eq!(t.nu(l, e), -t.nu(edge.left, e));
                }
                None => prop_assert_eq!(edge.kind, EdgeKind::Boundary),
            }
        }
        prop_assert_eq!(t.interface_edges().len() + t.boundary_edges().len(), t.edges().len());
    }

    #[test]
    fn lifted_geometry_is_consistent(count in 4usize..60, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let (zeta, geo) = surface(&t, seed);
        for (e, edge) in t.edges().iter().enumerate() {
            let [a, b] = edge.endpoints;
            let dz = zeta.0[b] - zeta.0[a];
            let want = edge.length.powi(2) + dz * dz;
            prop_assert!((geo.edge_length[e].powi(2) - want).abs() <= 1e-12 * want);
            prop_assert!(geo.edge_length[e] >= edge.length);
        }
        for k in 0..t.n_triangles() {
            let n = geo.normal[k];
            prop_assert!(n.z > 0.0);
            prop_assert!(geo.area3d[k] >= t.area(k) * (1.0 - 1e-15));
            for i in 0..3 {
                let c = geo.conormal[k][i];
                prop_assert!(c.dot(&n).abs() <= 1e-12);
                prop_assert!((c.norm() - 1.0).abs() <= 1e-12);
                let tri = t.triangles()[k];
                let (p, q) = (tri[i], tri[(i + 1) % 3]);
                let edge3 = Vec3::new(
                    t.vertices()[q].x - t.vertices()[p].x,
                    t.vertices()[q].y - t.vertices()[p].y,
                    zeta.0[q] - zeta.0[p],
                );
                prop_assert!(c.dot(&edge3).abs() <= 1e-12 * edge3.norm());
            }
        }
    }

    #[test]
    fn gradient_is_linear_and_exact_on_affine(count in 4usize..60, seed in any::<u64>(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let t = mesh(count, seed);
        let mut r = rng(seed);
        let q1 = NodalScalarField((0..t.n_vertices()).map(|_| r.gen_range(-1.0..1.0)).collect());
        let q2 = NodalScalarField((0..t.n_vertices()).map(|_| r.gen_range(-1.0..1.0)).collect());
        let mix = NodalScalarField(q1.0.iter().zip(&q2.0).map(|(x, y)| a * x + b * y).collect());
        let (g1, g2, gm) = (gradient_p1(&q1, &t), gradient_p1(&q2, &t), gradient_p1(&mix, &t));
        let scale = g1.max_norm().max(g2.max_norm()) * (a.abs() + b.abs()) + 1.0;
        for k in 0..t.n_triangles() {
            prop_assert!((gm.0[k] - (a * g1.0[k] + b * g2.0[k])).norm() <= 1e-12 * scale);
        }
        let affine = NodalScalarField::interpolate(&t, |p| a * p.x + b * p.y + 3.0);
        for g in gradient_p1(&affine, &t).0 {
            prop_assert!((g - Vec2::new(a, b)).norm() <= 1e-12 * (1.0 + a.abs() + b.abs()));
        }
    }

    #[test]
    fn numbering_is_a_bijection(xs in proptest::collection::vec(-1e6f64..1e6, 0..40)) {
        let even = &xs[..xs.len() / 2 * 2];
        let field = unnumb(even).unwrap();
        prop_assert_eq!(numb(&field), even.to_vec());
        prop_assert_eq!(unnumb(&numb(&field)).unwrap(), field);
    }

    #[test]
    fn darcy_linearity_and_gauge(count in 5usize..60, seed in any::<u64>(), al in -2.0f64..2.0, be in -2.0f64..2.0, c in -100.0f64..100.0) {
        let t = mesh(count, seed);
        let params = FluidParams::default();
        let zero = NodalScalarField::zeros(t.n_vertices());
        let z1 = NodalScalarField::interpolate(&t, wavy(seed));
        let z2 = NodalScalarField::interpolate(&t, wavy(seed.wrapping_add(1)));
        let mix = NodalScalarField(z1.0.iter().zip(&z2.0).map(|(x, y)| al * x + be * y).collect());
        let s1 = solve_pressure(&t, &z1, &zero, &params).unwrap();
        let s2 = solve_pressure(&t, &z2, &zero, &params).unwrap();
        let sm = solve_pressure(&t, &mix, &zero, &params).unwrap();
        let scale = max_abs(s1.p0.0.iter().chain(&s2.p0.0).copied()) * (al.abs() + be.abs()) + 1.0;
        for i in 0..t.n_vertices() {
            prop_assert!((sm.p0.0[i] - (al * s1.p0.0[i] + be * s2.p0.0[i])).abs() <= 1e-10 * scale);
            if t.is_boundary_vertex(i) {
                prop_assert_eq!(s1.p0.0[i], 0.0);
            }
        }

        let well = NodalScalarField::interpolate(&t, |p| log_well(4000.0, Vec2::new(110.0, -10.0), p));
        let base_sol = solve_pressure(&t, &z1, &well, &params).unwrap();
        let base = primary_field(&base_sol, &well, &z1, &params, &t);
        let z_shift = NodalScalarField(z1.0.iter().map(|x| x + c).collect());
        let p_shift = NodalScalarField(well.0.iter().map(|x| x + c).collect());
        let shifted_sol = solve_pressure(&t, &z_shift, &p_shift, &params).unwrap();
        let shifted = primary_field(&shifted_sol, &p_shift, &z_shift, &params, &t);
        for k in 0..t.n_triangles() {
            prop_assert!((base.0[k] - shifted.0[k]).norm() <= 1e-9 * (1.0 + base.max_norm()));
        }
    }

    #[test]
    fn affine_surface_needs_no_correction(count in 5usize..60, seed in any::<u64>(), sx in -3.0f64..3.0, sy in -3.0f64..3.0) {
        let t = mesh(count, seed);
        let zeta = NodalScalarField::interpolate(&t, |p| sx * p.x + sy * p.y);
        let zero = NodalScalarField::zeros(t.n_vertices());
        let sol = solve_pressure(&t, &zeta, &zero, &FluidParams::default()).unwrap();
        prop_assert!(max_abs(sol.p0.0.iter().copied()) <= 1e-12 * (1.0 + 981.0 * (sx.abs() + sy.abs())));
    }

    #[test]
    fn projection_properties(count in 4usize..50, seed in any::<u64>(), lam in -3.0f64..3.0) {
        let t = mesh(count, seed);
        let a = characterizing_matrix(&t);
        for r in 0..a.rows() {
            prop_assert_eq!(a.a.outer_view(r).unwrap().nnz(), 4);
        }
        let mut r = rng(seed);
        let x0 = random_field(t.n_triangles(), &mut r);
        let y0 = random_field(t.n_triangles(), &mut r);
        let v = project_conservative(&x0, &a).unwrap();
        let w = project_conservative(&y0, &a).unwrap();

        prop_assert!(max_abs(conservation_residual(&v, &t)) <= 1e-10 * x0.max_norm());
        let twice = project_conservative(&v, &a).unwrap();
        prop_assert!(max_abs(numb(&twice).iter().zip(numb(&v)).map(|(p, q)| p - q)) <= 1e-10);

        let comb = ElementField2(x0.0.iter().zip(&y0.0).map(|(p, q)| p + lam * q).collect());
        let pc = project_conservative(&comb, &a).unwrap();
        prop_assert!(max_abs(numb(&pc).iter().zip(numb(&v).iter().zip(numb(&w))).map(|(p, (q, s))| p - q - lam * s)) <= 1e-9);

        let norm = |f: &ElementField2| numb(f).iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(norm(&v) <= norm(&x0) * (1.0 + 1e-12));

        let diff: Vec<f64> = numb(&x0).iter().zip(numb(&v)).map(|(p, q)| p - q).collect();
        for b in conservative_basis(&t) {
            prop_assert!(max_abs(a.apply(&numb(&b))) <= 1e-12 * (1.0 + b.max_norm()));
            let dot: f64 = diff.iter().zip(numb(&b)).map(|(p, q)| p * q).sum();
            prop_assert!(dot.abs() <= 1e-8);
        }
    }

    #[test]
    fn projection_kernel_dimension(count in 4usize..40, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let a = characterizing_matrix(&t);
        let dense = DMatrix::from_fn(a.rows(), a.cols(), |i, j| a.a.get(i, j).copied().unwrap_or(0.0));
        let rank = if a.rows() == 0 { 0 } else { dense.svd(false, false).rank(1e-10) };
        let kernel = a.cols() - rank;
        let n = t.n_triangles();
        prop_assert!(kernel as i64 >= 2 * n as i64 - t.interface_edges().len() as i64);
        prop_assert!(2 * kernel > n);
    }

    #[test]
    fn lifting_matrix_is_an_isometry(nx in -1.0f64..1.0, ny in -1.0f64..1.0, nz in 0.05f64..1.0) {
        let n = Vec3::new(nx, ny, nz).normalize();
        let f = lifting_matrix(&n).unwrap();
        let ftf = f.transpose() * f;
        prop_assert!((ftf - nalgebra::Matrix2::identity()).amax() <= 1e-12);
        prop_assert!((n.transpose() * f).amax() <= 1e-12);
    }

    #[test]
    fn lifted_fields_keep_speed_and_dot_products(count in 4usize..50, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let (_, geo) = surface(&t, seed);
        let mut r = rng(seed);
        let v1 = random_field(t.n_triangles(), &mut r);
        let v2 = random_field(t.n_triangles(), &mut r);
        let (u1, u2) = (lift_field(&v1, &geo).unwrap(), lift_field(&v2, &geo).unwrap());
        for k in 0..t.n_triangles() {
            prop_assert!((u1.0[k].norm() - v1.0[k].norm()).abs() <= 1e-12);
            prop_assert!(u1.0[k].dot(&geo.normal[k]).abs() <= 1e-12);
            prop_assert!((u1.0[k].dot(&u2.0[k]) - v1.0[k].dot(&v2.0[k])).abs() <= 1e-12);
        }
    }

    #[test]
    fn lifting_preserves_conservation(count in 4usize..50, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let (_, geo) = surface(&t, seed);
        let mut r = rng(seed);
        let v = project_conservative(&random_field(t.n_triangles(), &mut r), &characterizing_matrix(&t)).unwrap();
        let u = lift_field(&v, &geo).unwrap();
        let worst = max_abs(lifted_conservation_residual(&u, &geo, &t));
        prop_assert!(worst <= 1e-10 * u.max_norm().max(1e-300), "lifted residual {worst:e}");
    }

    #[test]
    fn streamline_chord_stays_inside(count in 4usize..50, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let (_, geo) = surface(&t, seed);
        let mut r = rng(seed);
        let v = random_field(t.n_triangles(), &mut r);
        let u = lift_field(&v, &geo).unwrap();
        for k in 0..t.n_triangles() {
            let s = mean_streamline(k, &v.0[k], &u.0[k], &t);
            let speed = v.0[k].norm();
            prop_assert!(s.alpha > 0.0 && s.alpha <= t.diameter(k) / speed * (1.0 + 1e-12));
            prop_assert!((s.d - 0.5 * s.alpha * u.0[k].norm()).abs() <= 1e-15 * (1.0 + s.d));
            let [a, b] = s.chord.unwrap();
            prop_assert!(((b - a) - s.alpha * v.0[k]).norm() <= 1e-12 * t.diameter(k));
            prop_assert!(inside(&t, k, 0.5 * (a + b)));
        }
    }

    #[test]
    fn streamline_length_is_rotation_invariant(count in 4usize..50, seed in any::<u64>(), theta in 0.0f64..6.283) {
        let t = mesh(count, seed);
        let (zeta, geo) = surface(&t, seed);
        let mut r = rng(seed);
        let v = random_field(t.n_triangles(), &mut r);
        let d = streamline_data(&v, &lift_field(&v, &geo).unwrap(), &t).d;

        let rot = nalgebra::Rotation2::new(theta);
        let turned = Triangulation::new(t.vertices().iter().map(|p| rot * p).collect(), Some(t.triangles())).unwrap();
        let geo2 = lift_geometry(&turned, zeta.values()).unwrap();
        let v2 = ElementField2(v.0.iter().map(|x| rot * x).collect());
        let d2 = streamline_data(&v2, &lift_field(&v2, &geo2).unwrap(), &turned).d;
        for k in 0..t.n_triangles() {
            prop_assert!((d[k] - d2[k]).abs() <= 1e-12 * (1.0 + d[k]));
        }
    }
}

fn inside(t: &Triangulation, k: usize, p: Vec2) -> bool {
    let [a, b, c] = t.corners(k);
    let cross = |o: Vec2, x: Vec2, y: Vec2| (x - o).perp(&(y - o));
    let tol = -1e-12 * t.diameter(k).powi(2);
    cross(a, b, p) >= tol && cross(b, c, p) >= tol && cross(c, a, p) >= tol
}

proptest! {
    #![proptest_config(cfg(12))]

    #[test]
    fn generator_and_jump_chain_structure(count in 4usize..60, seed in any::<u64>()) {
        let t = mesh(count, seed);
        let (_, geo) = surface(&t, seed);
        let mut r = rng(seed);
        let v = project_conservative(&random_field(t.n_triangles(), &mut r), &characterizing_matrix(&t)).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let dense = q.to_dense();
        let max_rate = q.max_exit_rate();
        for i in 0..q.n_states() {
            prop_assert!(dense[(i, i)] <= 0.0);
            prop_assert!(dense.row(i).sum().abs() <= 1e-10 * max_rate.max(1.0));
            for j in 0..q.n_states() {
                if i != j {
                    prop_assert!(dense[(i, j)] >= 0.0);
                }
            }
            if i >= q.n_transient() {
                prop_assert!(dense.row(i).iter().all(|&x| x == 0.0));
            }
        }
        let qt = jump_chain(&q);
        for i in 0..q.n_states() {
            let row = qt.row(i);
            prop_assert!((row.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() <= 1e-15);
            prop_assert!(row.iter().all(|x| (0.0..=1.0).contains(&x.1)));
            prop_assert_eq!(qt.prob(i, i) == 1.0, dense[(i, i)] == 0.0);
        }
    }

    #[test]
    fn darcy_flow_graph_is_a_forest(count in 5usize..120, seed in any::<u64>(), strength in 0.0f64..5000.0) {
        let t = mesh(count, seed);
        let (zeta, geo) = surface(&t, seed);
        let params = FluidParams::default();
        let well = NodalScalarField::interpolate(&t, |p| log_well(strength, Vec2::new(3.0, -2.0), p));
        let sol = solve_pressure(&t, &zeta, &well, &params).unwrap();
        let v0 = primary_field(&sol, &well, &zeta, &params, &t);
        let v = project_conservative(&v0, &characterizing_matrix(&t)).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let forest = assert_forest(&flow_graph(&jump_chain(&q)));
        prop_assert!(forest.is_forest, "cycle {:?}", forest.cycle);
    }

    #[test]
    fn mass_is_conserved_and_survival_decreases(count in 4usize..40, seed in any::<u64>(), tf in 0.0f64..3.0) {
        let t = mesh(count, seed);
        let (_, geo) = surface(&t, seed);
        let mut r = rng(seed);
        let v = project_conservative(&random_field(t.n_triangles(), &mut r), &characterizing_matrix(&t)).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let c0: Vec<f64> = (0..q.n_states()).map(|_| r.gen_range(0.0..1.0)).collect();
        let c = evolve_mass(&q, tf, &c0).unwrap();
        let (s0, s1) = (c0.iter().sum::<f64>(), c.iter().sum::<f64>());
        prop_assert!((s0 - s1).abs() <= 1e-8 * s0);

        let tm = transition(&q, tf).unwrap();
        let phi = exit_time_distribution(&q, tf).unwrap();
        let later = exit_time_distribution(&q, tf + 0.1).unwrap();
        for k in 0..q.n_transient() {
            let row: f64 = (0..q.n_transient()).map(|l| tm[(k, l)]).sum();
            prop_assert!((phi[k] - row).abs() <= 1e-10);
            prop_assert!(later[k] <= phi[k] + 1e-12);
        }
    }

    #[test]
    fn planar_surfaces_have_no_curvature_loss(count in 5usize..60, seed in any::<u64>(), sx in -1.0f64..1.0, sy in -1.0f64..1.0, strength in 0.0f64..5000.0) {
        let t = mesh(count, seed);
        let zeta = NodalScalarField::interpolate(&t, |p| sx * p.x + sy * p.y);
        let geo = lift_geometry(&t, zeta.values()).unwrap();
        let params = FluidParams::default();
        let well = NodalScalarField::interpolate(&t, |p| log_well(strength, Vec2::new(3.0, -2.0), p));
        let sol = solve_pressure(&t, &zeta, &well, &params).unwrap();
        let v0 = primary_field(&sol, &well, &zeta, &params, &t);
        let v = project_conservative(&v0, &characterizing_matrix(&t)).unwrap();
        let u = lift_field(&v, &geo).unwrap();
        let q = generator(&v, &geo, &t).unwrap();
        let curv = curvature_dissipation(&v, &jump_chain(&q), &geo, &t, &params).unwrap();
        let scale = params.rho * params.depth * u.max_norm().powi(2) * geo.total_area();
        prop_assert!(curv.abs() <= 1e-10 * scale);
    }

    #[test]
    fn energy_rates_scale_with_speed(count in 5usize..50, seed in any::<u64>(), lam in 0.1f64..10.0) {
        let t = mesh(count, seed);
        let (_, geo) = surface(&t, seed);
        let params = FluidParams::default();
        let mut r = rng(seed);
        let v = project_conservative(&random_field(t.n_triangles(), &mut r), &characterizing_matrix(&t)).unwrap();
        let rates = |v: &ElementField2| {
            let u = lift_field(v, &geo).unwrap();
            let q = generator(v, &geo, &t).unwrap();
            let s = streamline_data(v, &u, &t);
            let dis = discharge(&q, &geo, params.depth);
            (
                curvature_dissipation(v, &jump_chain(&q), &geo, &t, &params).unwrap(),
                friction_dissipation(&u, &dis, &s, &params),
                gravity_rate(&u, &dis, &s, &params),
            )
        };
        let (c1, f1, g1) = rates(&v);
        let (c2, f2, g2) = rates(&v.scaled(lam));
        prop_assert!((c2 - lam.powi(2) * c1).abs() <= 1e-9 * c2.abs().max(1e-300));
        prop_assert!((f2 - lam.powi(3) * f1).abs() <= 1e-9 * f2.abs().max(1e-300));
        prop_assert!((g2 - lam * g1).abs() <= 1e-9 * g2.abs().max(1e-300));
    }

    #[test]
    fn uniform_lift_is_its_own_mean(count in 4usize..60, seed in any::<u64>(), sx in -1.0f64..1.0, sy in -1.0f64..1.0, vx in -1.0f64..1.0, vy in -1.0f64..1.0) {
        let t = mesh(count, seed);
        let zeta = NodalScalarField::interpolate(&t, |p| sx * p.x + sy * p.y);
        let geo = lift_geometry(&t, zeta.values()).unwrap();
        let u = lift_field(&ElementField2::constant(t.n_triangles(), Vec2::new(vx, vy)), &geo).unwrap();
        let m = preferential_direction(&u, &geo);
        prop_assert!((m - u.0[0]).norm() <= 1e-12 * (1.0 + u.0[0].norm()));
    }
}
