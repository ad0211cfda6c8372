//! End-to-end experiment: mesh, pressure, projection, lifting, transport,
//! observables and file output.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{si_factor, Dimension, ExperimentConfig, PressureConfig, SurfaceConfig};
use crate::darcy::{primary_field, solve_pressure, FluidParams};
use crate::error::{Error, Result};
use crate::fields::{ElementField2, ElementField3, NodalScalarField};
use crate::lifting::{lift_field, streamline_data, StreamlineData};
use crate::mesh::io::{format_vtk, read_mesh, CellData};
use crate::mesh::{lift_geometry, LiftedGeometry, Triangulation};
use crate::observables::{build_report, discharge, EnergyReport, ReportInputs};
use crate::output;
use crate::presets::{
    check_well_center, count_for_elements, example1_surface, example2_surface, log_well,
    place_points,
};
use crate::projection::{characterizing_matrix, project_conservative, CharacterizingMatrix};
use crate::transport::{
    assert_forest, exit_time_distribution, expected_exit_times, flow_graph, generator, jump_chain,
    ExitTimes, FlowGraph, ForestCheck, Generator, JumpChain,
};
use crate::Vec2;

/// Every intermediate product of one experiment.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub params: FluidParams,
    pub t: Triangulation,
    pub zeta: NodalScalarField,
    pub pressure: NodalScalarField,
    pub geo: LiftedGeometry,
    pub p0: NodalScalarField,
    pub v0: ElementField2,
    pub a: CharacterizingMatrix,
    pub v: ElementField2,
    pub u: ElementField3,
    pub streamlines: StreamlineData,
    pub generator: Generator,
    pub jump_chain: JumpChain,
    pub flow_graph: FlowGraph,
    pub forest: ForestCheck,
    pub exit_times: ExitTimes,
    pub report: EnergyReport,
}

impl PipelineResult {
    /// `q_K`, the discharge out of each triangle.
    pub fn discharge(&self) -> Vec<f64> {
        discharge(&self.generator, &self.geo, self.params.depth)
    }
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Builds the triangulation and nodal heights of the configured surface.
pub fn build_mesh(cfg: &ExperimentConfig) -> Result<(Triangulation, NodalScalarField)> {
    let height: fn(Vec2) -> f64 = match &cfg.surface {
        SurfaceConfig::MeshFile { path } => {
            let input = read_mesh(path)?;
            let positions = input.points.iter().map(|p| p.position).collect();
            let t = Triangulation::new(positions, input.triangles.as_deref())
                .map_err(invalid_as_mesh)?;
            let zeta = NodalScalarField(input.points.iter().map(|p| p.height).collect());
            return Ok((t, zeta));
        }
        SurfaceConfig::Example1 => example1_surface,
        SurfaceConfig::Example2 => example2_surface,
        SurfaceConfig::Flat => |_| 0.0,
        SurfaceConfig::Plane { slope } => {
            let s = Vec2::new(slope[0], slope[1]);
            let points = generated_points(cfg);
            let t = Triangulation::delaunay(points).map_err(invalid_as_mesh)?;
            let zeta = NodalScalarField::interpolate(&t, |p| s.dot(&p));
            return Ok((t, zeta));
        }
    };
    let t = Triangulation::delaunay(generated_points(cfg)).map_err(invalid_as_mesh)?;
    let zeta = NodalScalarField::interpolate(&t, height);
    Ok((t, zeta))
}

fn generated_points(cfg: &ExperimentConfig) -> Vec<Vec2> {
    let count = count_for_elements(cfg.mesh.target_elements);
    place_points(count, cfg.mesh.seed.unwrap_or(0), cfg.mesh.placement)
}

fn invalid_as_mesh(e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => Error::Mesh(m),
        other => other,
    }
}

/// Nodal values of the applied pressure, in Pa.
pub fn build_pressure(cfg: &ExperimentConfig, t: &Triangulation) -> Result<NodalScalarField> {
    match &cfg.pressure {
        PressureConfig::Zero => Ok(NodalScalarField::zeros(t.n_vertices())),
        PressureConfig::LogWell { strength, .. } => {
            let s = strength.si(Dimension::Pressure)?;
            let center = cfg.well_center()?.unwrap();
            let (lo, hi) = t.bounding_box();
            check_well_center(center, lo, hi)?;
            Ok(NodalScalarField::interpolate(t, |p| log_well(s, center, p)))
        }
        PressureConfig::NodalFile { path, unit } => {
            let f = si_factor(Dimension::Pressure, unit)?;
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let values = text
                .split_whitespace()
                .map(|w| {
                    w.parse::<f64>()
                        .map(|x| x * f)
                        .map_err(|_| Error::Config(format!("`{w}` in {} is not a number", path.display())))
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != t.n_vertices() {
                return Err(Error::Config(format!(
                    "{} holds {} pressure values for {} vertices",
                    path.display(),
                    values.len(),
                    t.n_vertices()
                )));
            }
            Ok(NodalScalarField(values))
        }
    }
}

/// Runs every numerical stage without touching the output directory.
pub fn simulate(cfg: &ExperimentConfig) -> Result<PipelineResult> {
    stage("config", cfg.validate())?;
    let params = stage("config", cfg.fluid.to_params())?;
    let (t, zeta) = stage("mesh", build_mesh(cfg))?;
    let geo = stage("mesh", lift_geometry(&t, zeta.values()))?;
    let pressure = stage("pressure", build_pressure(cfg, &t))?;

    let sol = stage("darcy", solve_pressure(&t, &zeta, &pressure, &params))?;
    let v0 = primary_field(&sol, &pressure, &zeta, &params, &t);

    let a = characterizing_matrix(&t);
    let v = stage("projection", project_conservative(&v0, &a))?;

    let u = stage("lifting", lift_field(&v, &geo))?;
    let streamlines = streamline_data(&v, &u, &t);

    let q = stage("transport", generator(&v, &geo, &t))?;
    let qt = jump_chain(&q);
    let graph = flow_graph(&qt);
    let forest = assert_forest(&graph);
    let exit_times = stage("transport", expected_exit_times(&q))?;

    let report = stage(
        "observables",
        build_report(&ReportInputs {
            t: &t,
            geo: &geo,
            v: &v,
            u: &u,
            generator: &q,
            jump_chain: &qt,
            streamlines: &streamlines,
            exit_times: &exit_times,
            params: &params,
            mean: cfg.report.exit_time_mean,
        }),
    )?;

    Ok(PipelineResult {
        params,
        t,
        zeta,
        pressure,
        geo,
        p0: sol.p0,
        v0,
        a,
        v,
        u,
        streamlines,
        generator: q,
        jump_chain: qt,
        flow_graph: graph,
        forest,
        exit_times,
        report,
    })
}

/// Survival-curve times and elements, filling in the defaults.
pub fn survival_selection(cfg: &ExperimentConfig, res: &PipelineResult) -> Result<(Vec<f64>, Vec<usize>)> {
    let n = res.t.n_triangles();
    let elements = if cfg.times.elements.is_empty() {
        let m = n.min(5);
        (0..m).map(|i| i * n / m).collect()
    } else {
        cfg.times.elements.clone()
    };
    if let Some(&k) = elements.iter().find(|&&k| k >= n) {
        return Err(Error::Config(format!("times.elements names triangle {k} of {n}")));
    }
    let mut times = cfg.time_grid_si()?;
    if times.is_empty() {
        let finite: Vec<f64> = res.exit_times.psi.iter().copied().filter(|p| p.is_finite()).collect();
        let scale = if finite.is_empty() {
            1.0
        } else {
            4.0 * finite.iter().sum::<f64>() / finite.len() as f64
        };
        times = (0..=40).map(|i| scale * i as f64 / 40.0).collect();
    }
    Ok((times, elements))
}

/// Writes the enabled exports into the output directory and returns their
/// paths.
pub fn write_outputs(cfg: &ExperimentConfig, res: &PipelineResult, written: &mut Vec<PathBuf>) -> Result<()> {
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut put = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        written.push(path.clone());
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    };

    if cfg.output.vtk {
        let points: Vec<_> = res
            .t
            .vertices()
            .iter()
            .zip(res.zeta.values())
            .map(|(p, z)| crate::Vec3::new(p.x, p.y, *z))
            .collect();
        let q = res.discharge();
        let cells = [
            CellData::Vectors("u", &res.u.0),
            CellData::Scalars("psi", &res.exit_times.psi),
            CellData::Scalars("q", &q),
        ];
        put("mesh.vtk", format_vtk(&cfg.name, &points, res.t.triangles(), &cells))?;
    }
    if cfg.output.fields {
        put("v.csv", output::field2_csv(&res.v))?;
        put("u.csv", output::field3_csv(&res.u))?;
        put("p0.csv", output::nodal_csv("p0", &res.p0))?;
    }
    if cfg.output.psi {
        put("psi.csv", output::psi_csv(&res.exit_times.psi))?;
    }
    if cfg.output.phi {
        let (times, elements) = survival_selection(cfg, res)?;
        let rows = times
            .iter()
            .map(|&s| {
                exit_time_distribution(&res.generator, s)
                    .map(|phi| elements.iter().map(|&k| phi[k]).collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        put("phi.csv", output::phi_csv(&times, &elements, &rows))?;
    }
    if cfg.output.report {
        put("report.csv", output::report_csv(&[(cfg.name.as_str(), &res.report)]))?;
    }
    if cfg.output.matrix {
        let path = dir.join("characterizing_matrix.mtx");
        written.push(path.clone());
        res.a.write_matrix_market(&path)?;
    }
    Ok(())
}

/// Runs the experiment and writes its outputs. On failure every file this
/// run created is removed, along with the output directory if it was
/// created here and is left empty.
pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<PipelineResult> {
    let res = simulate(cfg)?;
    let dir_existed = cfg.output.dir.exists();
    let mut written = Vec::new();
    if let Err(e) = write_outputs(cfg, &res, &mut written) {
        for p in &written {
            let _ = fs::remove_file(p);
        }
        if !dir_existed {
            let _ = fs::remove_dir(&cfg.output.dir);
        }
        return Err(e.in_stage("output"));
    }
    Ok(res)
}

/// Loads a configuration file and runs it.
pub fn run_config_file(path: &Path) -> Result<PipelineResult> {
    let cfg = ExperimentConfig::load(path).map_err(|e| e.in_stage("config"))?;
    run_pipeline(&cfg)
}
