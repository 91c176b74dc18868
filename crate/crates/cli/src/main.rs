//! Batch front end: loads a curve system, runs one operation, writes
//! comma-separated tables plus a run manifest into the output directory.
//! Identical invocations produce identical bytes; failures exit nonzero
//! with a machine-readable error record on stderr.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coxdev::coxeter::{
    coset_rep, in_parabolic, multiply, normal_form, parabolic_order, word_from_labels, NormalForm,
};
use coxdev::curve_complex::{
    enumerate_simplices, validate_simplex_labels, IntersectionGraph, PantsDecomposition,
};
use coxdev::development::{base_point, canonicalize, closed_star, DevPoint, DomainPoint};
use coxdev::fixtures;
use coxdev::io::{
    distance_matrix_table, fr_table, geodesic_sample_table, read_curve_system, read_point_set,
    twist_limit_table, PointRecord,
};
use coxdev::limits::{noncompactness_demo, twist_limit_experiment, wall_projection};
use coxdev::model_metric::{model_distance, model_geodesic, CuspProfile, ModelChart};
use coxdev::npc_analysis::{
    angle_criterion, circumcenter, fr_check, probe_directions, triangle_comparison_residual,
    PointSet,
};
use coxdev::sampling::{random_point_set, random_triangle};
use coxdev::symmetry::{check_diagram_automorphism, properness_certificate};

#[derive(Parser)]
#[command(name = "coxdev", version, about = "Coxeter developments of cusp-product models")]
struct Cli {
    /// Curve-system document; the bundled genus-2 system when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Pants curves, comma separated. Defaults to the lexicographically
    /// first maximal disjoint set.
    #[arg(long, global = true, value_delimiter = ',')]
    pants: Vec<String>,

    /// Output directory for tables and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed for randomized suites; those commands refuse to run without it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Arclength step for sampled geodesic tables.
    #[arg(long, global = true, default_value_t = 0.05)]
    resolution: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the curve system and enumerate its simplices.
    Complex,
    /// Word arithmetic in the reflection group.
    Cox {
        #[command(subcommand)]
        op: CoxOp,
    },
    /// Development bookkeeping: canonical forms, reflections, stars.
    Dev {
        #[command(subcommand)]
        op: DevOp,
    },
    /// Pairwise distance matrix of a point set.
    Dist {
        #[arg(long)]
        points: PathBuf,
    },
    /// Sampled geodesic between two points of a set.
    Geodesic {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 0)]
        from: usize,
        #[arg(long, default_value_t = 1)]
        to: usize,
    },
    /// Circumcenter of a point set with restart and angle certificates.
    Circumcenter {
        #[arg(long)]
        points: PathBuf,
    },
    /// Rank audit of random point sets (seed required).
    FrAudit {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        max_points: usize,
    },
    /// Triangle comparison residuals on random triangles (seed required).
    Cat0Sample {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Twist-degeneration table toward the reflected concatenation.
    TwistLimit {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Bounded twist orbit with uniform separation.
    Noncompact {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Diagram-automorphism validation and isotropy certificates.
    Symmetry {
        /// Label map "a:b,c:d". Unlisted curves must not appear elsewhere.
        #[arg(long)]
        map: Option<String>,
        /// Curve subset for the isotropy certificate.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CoxOp {
    /// Normal form of a word (comma-separated labels).
    Nf {
        #[arg(long, value_delimiter = ',')]
        word: Vec<String>,
    },
    /// Product of two words.
    Mul {
        #[arg(long, value_delimiter = ',')]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<String>,
    },
    /// Coset decomposition of a word modulo a parabolic.
    Coset {
        #[arg(long, value_delimiter = ',')]
        word: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
    },
}

#[derive(Subcommand)]
enum DevOp {
    /// Canonical form of a symbolic point [g, y].
    Canon {
        #[arg(long, value_delimiter = ',')]
        chamber: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
        #[arg(long, default_value = "y")]
        name: String,
    },
    /// Act on a symbolic point by a word.
    Act {
        #[arg(long, value_delimiter = ',')]
        word: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        chamber: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
        #[arg(long, default_value = "y")]
        name: String,
    },
    /// Closed star of a symbolic point: the chambers meeting it.
    Star {
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
    },
}

struct Failure {
    name: &'static str,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            name: "Config",
            message: message.into(),
        }
    }

    fn record(&self) -> String {
        serde_json::json!({ "error": self.name, "message": self.message }).to_string()
    }
}

impl From<coxdev::Error> for Failure {
    fn from(e: coxdev::Error) -> Self {
        use coxdev::Error as E;
        let name = match &e {
            E::UnknownCurve(_) => "UnknownCurve",
            E::NotDisjoint(_, _) => "NotDisjoint",
            E::TooLarge(_) => "TooLarge",
            E::InvalidGenus(_) => "InvalidGenus",
            E::GraphMismatch(_) => "GraphMismatch",
            E::UnrealizedChamber(_) => "UnrealizedChamber",
            E::SolverNoConvergence(_) => "SolverNoConvergence",
            E::NotAtWall(_) => "NotAtWall",
            E::MalformedPath(_) => "MalformedPath",
            E::ConstraintViolated(_) => "ConstraintViolated",
            E::Infeasible(_) => "Infeasible",
            E::NotBijective(_) => "NotBijective",
            E::RelationViolated(_) => "RelationViolated",
            E::ChartNotPreserved(_) => "ChartNotPreserved",
            E::Io(_) => "Io",
            E::Parse(_) => "Parse",
        };
        Failure {
            name,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            name: "Io",
            message: e.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => println!("{summary}"),
        Err(f) => {
            eprintln!("{}", f.record());
            std::process::exit(1);
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    if !(cli.resolution.is_finite() && cli.resolution > 0.0) {
        return Err(Failure::config(format!(
            "resolution must be positive, got {}",
            cli.resolution
        )));
    }
    fs::create_dir_all(&cli.out)?;

    let graph = match &cli.input {
        Some(path) => read_curve_system(&fs::read_to_string(path)?)?,
        None => fixtures::genus2_graph(),
    };
    write_manifest(cli)?;

    match &cli.command {
        Command::Complex => cmd_complex(cli, &graph),
        Command::Cox { op } => cmd_cox(cli, &graph, op),
        Command::Dev { op } => cmd_dev(cli, &graph, op),
        Command::Dist { points } => {
            let chart = build_chart(cli, &graph)?;
            let pts = load_points(&chart, points)?;
            let mut matrix = vec![vec![0.0; pts.len()]; pts.len()];
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let d = model_distance(&chart, &pts[i], &pts[j])?;
                    matrix[i][j] = d;
                    matrix[j][i] = d;
                }
            }
            let table = distance_matrix_table(&matrix);
            fs::write(cli.out.join("distances.csv"), table)?;
            Ok(format!("ok: {} points, distances.csv written", pts.len()))
        }
        Command::Geodesic { points, from, to } => {
            let chart = build_chart(cli, &graph)?;
            let pts = load_points(&chart, points)?;
            let (a, b) = (index(&pts, *from)?, index(&pts, *to)?);
            let sample = model_geodesic(&chart, a, b, cli.resolution)?;
            fs::write(cli.out.join("geodesic.csv"), geodesic_sample_table(&sample))?;
            Ok(format!(
                "ok: length {}, {} samples, geodesic.csv written",
                sample.length(),
                sample.breakpoints().len()
            ))
        }
        Command::Circumcenter { points } => {
            let chart = build_chart(cli, &graph)?;
            let pts = load_points(&chart, points)?;
            let set = PointSet::new(pts)?;
            let data = circumcenter(&chart, &set)?;
            let dirs = probe_directions(&chart, &data, &set, &[], cli.seed.unwrap_or(0), 32)?;
            let angle = angle_criterion(&chart, &data, &set, &dirs)?;
            let center = point_record(&chart, &data.center)?;
            let report = serde_json::json!({
                "center": { "chamber": center.chamber, "coords": center.coords },
                "radius": data.radius,
                "iterations": data.iterations,
                "seed_spread": data.seed_spread,
                "circumset": data.circumset,
                "min_max_angle": angle,
            });
            fs::write(
                cli.out.join("circumcenter.json"),
                format!("{report:#}\n"),
            )?;
            Ok(format!(
                "ok: radius {}, min-max angle {}, circumcenter.json written",
                data.radius, angle
            ))
        }
        Command::FrAudit {
            trials,
            k,
            max_points,
        } => {
            let chart = build_chart(cli, &graph)?;
            let mut rng = seeded(cli)?;
            let mut reports = Vec::with_capacity(*trials);
            let mut worst: f64 = f64::INFINITY;
            for _ in 0..*trials {
                let n = rng.gen_range(3..=(*max_points).max(3));
                let set = random_point_set(&chart, &mut rng, n)?;
                let report = fr_check(&chart, &set, *k)?;
                worst = worst.min(report.margin);
                reports.push(report);
            }
            let all_pass = reports.iter().all(|r| r.pass);
            fs::write(cli.out.join("fr_audit.csv"), fr_table(&reports))?;
            Ok(format!(
                "{}: {} sets, k = {k}, worst margin {worst}, fr_audit.csv written",
                if all_pass { "ok" } else { "FAIL" },
                reports.len()
            ))
        }
        Command::Cat0Sample { trials } => {
            let chart = build_chart(cli, &graph)?;
            let mut rng = seeded(cli)?;
            let mut rows = String::from("trial,lambda,residual\n");
            let mut worst: f64 = f64::NEG_INFINITY;
            for trial in 0..*trials {
                let [z, x0, x1] = random_triangle(&chart, &mut rng)?;
                for lambda in [0.25, 0.5, 0.75] {
                    let r = triangle_comparison_residual(&chart, &z, &x0, &x1, lambda)?;
                    worst = worst.max(r);
                    rows.push_str(&format!("{trial},{lambda},{r}\n"));
                }
            }
            fs::write(cli.out.join("cat0.csv"), rows)?;
            Ok(format!(
                "ok: {trials} triangles, max residual {worst}, cat0.csv written"
            ))
        }
        Command::TwistLimit {
            points,
            curve,
            step,
            n,
        } => {
            let chart = build_chart(cli, &graph)?;
            let pts = load_points(&chart, points)?;
            let p1 = index(&pts, 0)?;
            let c = chart.graph().curve(curve)?;
            let rows = twist_limit_experiment(&chart, p1, c, *step, *n)?;
            fs::write(cli.out.join("twist_limit.csv"), twist_limit_table(&rows))?;
            let last = rows.last().expect("n >= 1");
            Ok(format!(
                "ok: n = {}, endpoint {}, hausdorff {}, twist_limit.csv written",
                last.n, last.endpoint_distance, last.hausdorff
            ))
        }
        Command::Noncompact {
            points,
            curve,
            step,
            n,
        } => {
            let chart = build_chart(cli, &graph)?;
            let pts = load_points(&chart, points)?;
            let p1 = index(&pts, 0)?;
            let c = chart.graph().curve(curve)?;
            let p0 = wall_projection(&chart, p1, c)?;
            let report = noncompactness_demo(&chart, &p0, p1, c, *step, *n)?;
            fs::write(
                cli.out.join("noncompact.csv"),
                distance_matrix_table(&report.matrix),
            )?;
            let summary = serde_json::json!({
                "orbit_points": report.matrix.len(),
                "delta": report.delta,
                "bound": report.bound,
                "stationarity_residual": report.stationarity_residual,
            });
            fs::write(cli.out.join("noncompact.json"), format!("{summary:#}\n"))?;
            Ok(format!(
                "ok: delta {} within radius {}, noncompact.csv written",
                report.delta, report.bound
            ))
        }
        Command::Symmetry { map, subset } => cmd_symmetry(cli, &graph, map.as_deref(), subset),
    }
}

fn write_manifest(cli: &Cli) -> Result<(), Failure> {
    let manifest = serde_json::json!({
        "package": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "command": std::env::args().skip(1).collect::<Vec<_>>(),
        "input": cli.input.as_ref().map(|p| p.display().to_string()),
        "pants": cli.pants,
        "seed": cli.seed,
        "resolution": cli.resolution,
    });
    fs::write(cli.out.join("manifest.json"), format!("{manifest:#}\n"))?;
    Ok(())
}

fn seeded(cli: &Cli) -> Result<ChaCha8Rng, Failure> {
    match cli.seed {
        Some(s) => Ok(ChaCha8Rng::seed_from_u64(s)),
        None => Err(Failure::config(
            "sampling commands need --seed for reproducibility",
        )),
    }
}

fn build_chart(cli: &Cli, graph: &Arc<IntersectionGraph>) -> Result<ModelChart, Failure> {
    let simplex = if cli.pants.is_empty() {
        // Greedy in label order; maximality is checked by the constructor.
        let mut kept = Vec::new();
        for c in graph.curves() {
            if kept.iter().all(|&k| graph.disjoint(k, c)) {
                kept.push(c);
            }
        }
        let labels: Vec<&str> = kept.iter().map(|&c| graph.label(c)).collect();
        validate_simplex_labels(graph, &labels)?
    } else {
        let labels: Vec<&str> = cli.pants.iter().map(String::as_str).collect();
        validate_simplex_labels(graph, &labels)?
    };
    let pants = PantsDecomposition::new(graph, simplex)?;
    Ok(ModelChart::new(
        Arc::clone(graph),
        pants,
        CuspProfile::default(),
    )?)
}

fn load_points(chart: &ModelChart, path: &PathBuf) -> Result<Vec<DevPoint>, Failure> {
    Ok(read_point_set(chart, &fs::read_to_string(path)?)?)
}

fn index<'p>(pts: &'p [DevPoint], i: usize) -> Result<&'p DevPoint, Failure> {
    pts.get(i).ok_or_else(|| {
        Failure::config(format!("point index {i} out of range ({} points)", pts.len()))
    })
}

fn point_record(chart: &ModelChart, p: &DevPoint) -> Result<PointRecord, Failure> {
    let coords = p
        .domain()
        .coords()
        .ok_or_else(|| Failure::config("symbolic point has no coordinates"))?;
    Ok(PointRecord {
        chamber: p
            .chamber()
            .labels(chart.graph())
            .iter()
            .map(|s| s.to_string())
            .collect(),
        coords: coords.iter().map(|rt| (rt.r, rt.theta)).collect(),
    })
}

fn cmd_complex(cli: &Cli, graph: &IntersectionGraph) -> Result<String, Failure> {
    let simplices = enumerate_simplices(graph, graph.max_disjoint_clique())?;
    let mut rows = String::from("size,curves,parabolic_order\n");
    for s in &simplices {
        rows.push_str(&format!(
            "{},{},{}\n",
            s.len(),
            s.labels(graph).join("|"),
            parabolic_order(s)
        ));
    }
    fs::write(cli.out.join("simplices.csv"), rows)?;
    Ok(format!(
        "ok: genus {}, {} curves, {} simplices, max disjoint set {}, simplices.csv written",
        graph.genus(),
        graph.curve_count(),
        simplices.len(),
        graph.max_disjoint_clique()
    ))
}

fn cmd_cox(cli: &Cli, graph: &IntersectionGraph, op: &CoxOp) -> Result<String, Failure> {
    let parse = |labels: &[String]| -> Result<NormalForm, Failure> {
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let word = word_from_labels(graph, &refs)?;
        Ok(normal_form(graph, &word))
    };
    let show = |w: &NormalForm| -> String {
        if w.is_identity() {
            "e".to_string()
        } else {
            w.labels(graph).join(" ")
        }
    };
    let (file, text) = match op {
        CoxOp::Nf { word } => ("normal_form.txt", show(&parse(word)?)),
        CoxOp::Mul { a, b } => (
            "product.txt",
            show(&multiply(graph, &parse(a)?, &parse(b)?)?),
        ),
        CoxOp::Coset { word, sigma } => {
            let w = parse(word)?;
            let refs: Vec<&str> = sigma.iter().map(String::as_str).collect();
            let sig = validate_simplex_labels(graph, &refs)?;
            let rep = coset_rep(graph, &w, &sig)?;
            let inside = multiply(graph, &coxdev::coxeter::inverse(graph, &rep)?, &w)?;
            debug_assert!(in_parabolic(&inside, &sig));
            (
                "coset.txt",
                format!("rep: {}\nparabolic part: {}", show(&rep), show(&inside)),
            )
        }
    };
    let mut text = text;
    text.push('\n');
    fs::write(cli.out.join(file), &text)?;
    Ok(format!("ok: {}", text.trim_end().replace('\n', "; ")))
}

fn cmd_dev(cli: &Cli, graph: &IntersectionGraph, op: &DevOp) -> Result<String, Failure> {
    let parse_word = |labels: &[String]| -> Result<NormalForm, Failure> {
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let word = word_from_labels(graph, &refs)?;
        Ok(normal_form(graph, &word))
    };
    let parse_sigma = |labels: &[String]| -> Result<_, Failure> {
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Ok(validate_simplex_labels(graph, &refs)?)
    };
    let show_point = |p: &DevPoint| -> String {
        let chamber = if p.chamber().is_identity() {
            "e".to_string()
        } else {
            p.chamber().labels(graph).join(" ")
        };
        format!("chamber: {chamber}; sigma: {}", p.sigma().labels(graph).join(" "))
    };
    let (file, text) = match op {
        DevOp::Canon {
            chamber,
            sigma,
            name,
        } => {
            let g = parse_word(chamber)?;
            let y = DomainPoint::symbolic(parse_sigma(sigma)?, name.clone());
            ("canon.txt", show_point(&canonicalize(graph, &g, y)?))
        }
        DevOp::Act {
            word,
            chamber,
            sigma,
            name,
        } => {
            let h = parse_word(word)?;
            let g = parse_word(chamber)?;
            let y = DomainPoint::symbolic(parse_sigma(sigma)?, name.clone());
            let p = canonicalize(graph, &g, y)?;
            ("act.txt", show_point(&coxdev::development::act(graph, &h, &p)?))
        }
        DevOp::Star { sigma } => {
            let y = DomainPoint::symbolic(parse_sigma(sigma)?, "y");
            let p = base_point(graph, y)?;
            let star = closed_star(graph, &p)?;
            let mut rows = String::from("chamber\n");
            for w in &star {
                rows.push_str(&format!(
                    "{}\n",
                    if w.is_identity() {
                        "e".to_string()
                    } else {
                        w.labels(graph).join(" ")
                    }
                ));
            }
            fs::write(cli.out.join("star.csv"), &rows)?;
            return Ok(format!("ok: {} chambers in the closed star, star.csv written", star.len()));
        }
    };
    let mut text = text;
    text.push('\n');
    fs::write(cli.out.join(file), &text)?;
    Ok(format!("ok: {}", text.trim_end()))
}

fn cmd_symmetry(
    cli: &Cli,
    graph: &IntersectionGraph,
    map: Option<&str>,
    subset: &[String],
) -> Result<String, Failure> {
    let mut parts = Vec::new();
    if let Some(spec) = map {
        let mut pairs = Vec::new();
        for item in spec.split(',') {
            let (from, to) = item.split_once(':').ok_or_else(|| {
                Failure::config(format!("map entries look like from:to, got {item}"))
            })?;
            pairs.push((from.trim(), to.trim()));
        }
        let auto = check_diagram_automorphism(graph, &pairs)?;
        let listed: Vec<String> = auto
            .label_pairs(graph)
            .iter()
            .map(|(a, b)| format!("{a}:{b}"))
            .collect();
        let report = serde_json::json!({ "valid": true, "map": listed });
        fs::write(cli.out.join("automorphism.json"), format!("{report:#}\n"))?;
        parts.push("automorphism valid".to_string());
    }
    if !subset.is_empty() {
        let curves: Vec<_> = subset
            .iter()
            .map(|l| graph.curve(l))
            .collect::<coxdev::Result<_>>()?;
        let cert = properness_certificate(graph, &curves)?;
        let report = serde_json::json!({
            "subset": subset,
            "is_simplex": cert.is_simplex,
            "isotropy_order": cert.isotropy_order.map(|o| o.to_string()),
            "witness": cert.witness.map(|(s, t)| vec![
                graph.label(s).to_string(),
                graph.label(t).to_string(),
            ]),
            "fixed_set_empty": cert.fixed_set_empty,
        });
        fs::write(cli.out.join("isotropy.json"), format!("{report:#}\n"))?;
        parts.push(match cert.isotropy_order {
            Some(o) => format!("isotropy order {o}"),
            None => "infinite subgroup, empty fixed set".to_string(),
        });
    }
    if parts.is_empty() {
        return Err(Failure::config("symmetry needs --map and/or --subset"));
    }
    Ok(format!("ok: {}", parts.join("; ")))
}
