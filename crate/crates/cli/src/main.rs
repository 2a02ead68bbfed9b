use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kleinfold::analysis::intersection::{hausdorff_to_curve, split_by_plane};
use kleinfold::analysis::{intersection_closed_form, intersection_oracle, Tolerances};
use kleinfold::io::{render_mesh, render_pattern, render_report, PatternStyle};
use kleinfold::mesh::{cut_slits, slit_arcs, tessellate, tessellate_conforming, SlitPolicy};
use kleinfold::{chain_motions, verify_all, Error, FigureConfig, SineArc};

const EXIT_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(name = "kleinfold", version, about = "Folded-cylinder Klein bottles and tori: build, verify, export")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a triangle mesh (OBJ) of the folded figure.
    Build(BuildArgs),
    /// Check every property and write a JSON report; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Write the flat crease pattern (SVG).
    Pattern(PatternArgs),
    /// Write the pass-through curve at one joint (JSON).
    Intersect(IntersectArgs),
}

#[derive(Args)]
struct FigureArgs {
    /// Polygon sides.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Cylinder radius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Strip height, equal to the polygon edge length.
    #[arg(long, default_value_t = 2.0)]
    strip_height: f64,
}

impl FigureArgs {
    fn config(&self) -> kleinfold::Result<FigureConfig> {
        FigureConfig::new(self.n, self.radius, self.strip_height)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Outgoing,
    Incoming,
    Alternate,
}

impl From<PolicyArg> for SlitPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Outgoing => SlitPolicy::Outgoing,
            PolicyArg::Incoming => SlitPolicy::Incoming,
            PolicyArg::Alternate => SlitPolicy::Alternate,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    figure: FigureArgs,
    #[arg(long, default_value_t = 64)]
    res_u: usize,
    /// Rows per strip.
    #[arg(long, default_value_t = 16)]
    res_v: usize,
    /// Open slits along the pass-through curves; bare flag means outgoing.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "outgoing")]
    slits: Option<PolicyArg>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    figure: FigureArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol_analytic: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_chain: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_fd: f64,
    /// Report file; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct PatternArgs {
    #[command(flatten)]
    figure: FigureArgs,
    /// Document units per length unit.
    #[arg(long, default_value_t = 30.0)]
    scale: f64,
    /// Grid cells as `UxV`.
    #[arg(long, default_value = "12x6", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Which tube is cut at each joint.
    #[arg(long, value_enum, default_value = "outgoing")]
    slits: PolicyArg,
    #[arg(long)]
    no_glyphs: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IntersectArgs {
    #[command(flatten)]
    figure: FigureArgs,
    /// Joint index; the curve where tube k−1 meets tube k.
    #[arg(long, default_value_t = 0)]
    pair: usize,
    /// Also run the brute-force oracle and report its distance to the curve.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 128)]
    oracle_grid: usize,
    #[arg(long, default_value_t = 65)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected UxV, got {s:?}"))?;
    let u: usize = u.trim().parse().map_err(|e| format!("{e}"))?;
    let v: usize = v.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((u, v))
}

#[derive(Serialize)]
struct ArcOut {
    center: f64,
    amplitude: f64,
    u_start: f64,
    u_end: f64,
}

impl From<&SineArc> for ArcOut {
    fn from(a: &SineArc) -> Self {
        Self { center: a.center, amplitude: a.amplitude, u_start: a.u_start, u_end: a.u_end }
    }
}

#[derive(Serialize)]
struct OracleOut {
    grid: usize,
    points: usize,
    pass_through_points: usize,
    hausdorff: f64,
}

#[derive(Serialize)]
struct IntersectOut {
    pair: usize,
    tubes: [usize; 2],
    center: [f64; 3],
    plane_normal: [f64; 3],
    semi_major: f64,
    semi_minor: f64,
    preimage: ArcOut,
    incoming_arcs: Vec<ArcOut>,
    outgoing_arcs: Vec<ArcOut>,
    samples: Vec<[f64; 3]>,
    oracle: Option<OracleOut>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> kleinfold::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn build(args: &BuildArgs) -> kleinfold::Result<u8> {
    let atlas = chain_motions(&args.figure.config()?)?;
    let mesh = match args.slits {
        None => tessellate(&atlas, args.res_u, args.res_v)?,
        Some(p) => {
            let policy = SlitPolicy::from(p);
            let curves = (0..atlas.config().n).map(|k| intersection_closed_form(&atlas, k)).collect::<Result<Vec<_>, _>>()?;
            let mesh = tessellate_conforming(&atlas, args.res_u, args.res_v, &curves, policy)?;
            cut_slits(&mesh, &curves, policy)?
        }
    };
    emit(&render_mesh(&mesh), args.out.as_ref())?;
    eprintln!("{} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len());
    Ok(0)
}

fn verify(args: &VerifyArgs) -> kleinfold::Result<u8> {
    let config = args.figure.config()?;
    let tol = Tolerances { analytic: args.tol_analytic, chain: args.tol_chain, fd: args.tol_fd, ..Tolerances::default() };
    let report = verify_all(&config, &tol, args.seed)?;
    emit(&render_report(&report)?, args.report.as_ref())?;
    for c in &report.checks {
        eprintln!("{:<36} {:<4} {:.3e} (tol {:.0e})", c.name, if c.pass { "ok" } else { "FAIL" }, c.max_residual, c.tolerance);
    }
    Ok(if report.overall_pass { 0 } else { EXIT_FAILED })
}

fn pattern(args: &PatternArgs) -> kleinfold::Result<u8> {
    let atlas = chain_motions(&args.figure.config()?)?;
    let curves = (0..atlas.config().n).map(|k| intersection_closed_form(&atlas, k)).collect::<Result<Vec<_>, _>>()?;
    let style = PatternStyle {
        scale: args.scale,
        grid_cells_u: args.grid.0,
        grid_cells_v: args.grid.1,
        glyphs: !args.no_glyphs,
        ..PatternStyle::default()
    };
    let domain = atlas.domain();
    let svg = render_pattern(domain, &domain.creases(), &slit_arcs(&curves, args.slits.into()), &style)?;
    emit(&svg, args.out.as_ref())?;
    Ok(0)
}

fn intersect(args: &IntersectArgs) -> kleinfold::Result<u8> {
    let atlas = chain_motions(&args.figure.config()?)?;
    let curve = intersection_closed_form(&atlas, args.pair)?;
    let oracle = if args.oracle {
        let points = intersection_oracle(&atlas, args.pair, args.oracle_grid)?;
        let (_, pass) = split_by_plane(&atlas, &curve, &points);
        Some(OracleOut {
            grid: args.oracle_grid,
            points: points.len(),
            pass_through_points: pass.len(),
            hausdorff: hausdorff_to_curve(&curve, &pass),
        })
    } else {
        None
    };
    let xyz = |p: kleinfold::Point3| [p.x, p.y, p.z];
    let out = IntersectOut {
        pair: curve.pair,
        tubes: [curve.incoming_tube, curve.outgoing_tube],
        center: xyz(curve.center),
        plane_normal: [curve.plane_normal.x, curve.plane_normal.y, curve.plane_normal.z],
        semi_major: curve.semi_major,
        semi_minor: curve.semi_minor,
        preimage: (&curve.preimage).into(),
        incoming_arcs: curve.incoming_arc.iter().map(ArcOut::from).collect(),
        outgoing_arcs: curve.outgoing_arc.iter().map(ArcOut::from).collect(),
        samples: curve.sample_retained(args.samples).into_iter().map(xyz).collect(),
        oracle,
    };
    let mut text = serde_json::to_string_pretty(&out).map_err(Error::from)?;
    text.push('\n');
    emit(&text, args.out.as_ref())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a),
        Command::Pattern(a) => pattern(a),
        Command::Intersect(a) => intersect(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::Domain(_) | Error::Unsupported(_) | Error::Policy(_) => EXIT_CONFIG,
                _ => EXIT_FAILED,
            };
            ExitCode::from(code)
        }
    }
}
