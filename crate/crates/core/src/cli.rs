//! The `reflexive` command-line front end.
//!
//! Every subcommand takes one or more polytope files. Text output goes to
//! stdout; with `--json` each file produces one JSON object (an array when
//! several files are given) with stable, sorted keys. Exit status is 0 on
//! success, 1 if any file hits a domain error, 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chern::{candidate_classes, curve_census, ChernReport, CurveClass, IntersectionForm};
use crate::error::{Error, ParseError, Result};
use crate::fan::{
    face_fan, is_nef, mpcp_triangulate, picard_rank_q, qcartier_data, singularity_census, Fan, FanKind,
    PlacingOrder, WeilDivisor,
};
use crate::hodge::{classify_boundary, type_counts, HodgeReport, PointType};
use crate::io::{format_polytope, read_polytope};
use crate::lattice::{MPoint, NPoint, M, N};
use crate::polytope::{hull, Polytope, ReflexivePair};

#[derive(Parser, Debug)]
#[command(name = "reflexive", version, about = "Reflexive polytopes, toric fans and Calabi-Yau invariants")]
struct Cli {
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Convex geometry of a polytope
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Hodge numbers and divisors of the Calabi-Yau hypersurface
    Cy {
        #[command(subcommand)]
        cmd: CyCmd,
    },
    /// Face fans and MPCP triangulations of the dual polytope
    Fan {
        #[command(subcommand)]
        cmd: FanCmd,
    },
    /// Second Chern class and curve census on the MPCP resolution
    Chern {
        #[command(subcommand)]
        cmd: ChernCmd,
    },
}

macro_rules! leaf_commands {
    ($cmd:ident, $op:ident { $($(#[doc = $doc:literal])* $variant:ident),* $(,)? }) => {
        #[derive(Subcommand, Debug)]
        enum $cmd {
            $($(#[doc = $doc])* $variant(Common),)*
        }

        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        enum $op {
            $($variant,)*
        }

        impl $cmd {
            fn split(self) -> ($op, Common) {
                match self {
                    $($cmd::$variant(c) => ($op::$variant, c),)*
                }
            }
        }
    };
}

leaf_commands!(PolyCmd, PolyOp {
    /// Reflexivity, dimension and vertex count
    Check,
    /// Vertices of the polar dual
    Dual,
    /// Lattice-point census
    Points,
    /// Face lattice with per-face point counts
    Faces,
    /// Re-emit the parsed points
    Dump,
});

leaf_commands!(CyCmd, CyOp {
    /// h11, h12 and Euler characteristic
    Hodge,
    /// Boundary point types and divisor census
    Census,
});

leaf_commands!(FanCmd, FanOp {
    /// Summary of the face fan (or the MPCP fan with --resolve)
    Build,
    /// Summary of the MPCP fan
    Mpcp,
    /// Maximal cones of multiplicity above one
    Singular,
    /// Rank of the rational Picard group
    Picard,
    /// Q-Cartier and nef test for --divisor
    Nef,
});

leaf_commands!(ChernCmd, ChernOp {
    /// c2 paired with every toric divisor (and with --divisor if given)
    C2,
    /// Classification of the 2-cones of the MPCP fan
    Curves,
});

#[derive(Args, Debug, Clone)]
struct Common {
    /// Polytope files
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
    /// Use the MPCP fan instead of the face fan
    #[arg(long)]
    resolve: bool,
    /// Divisor as comma-separated terms `<ray>=<coeff>` or `-K`; a ray is an
    /// index or a coordinate tuple such as `(1,0,0,0)`
    #[arg(long, allow_hyphen_values = true)]
    divisor: Option<String>,
    /// Worker threads for processing several files
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Insertion order of the placing triangulation
    #[arg(long, value_enum, default_value_t = Order::Norm)]
    order: Order,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Norm,
    Lex,
}

impl From<Order> for PlacingOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Norm => PlacingOrder::Norm,
            Order::Lex => PlacingOrder::Lexicographic,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Command {
    Poly(PolyOp),
    Cy(CyOp),
    Fan(FanOp),
    Chern(ChernOp),
}

/// One file's result.
struct Report {
    text: String,
    json: Value,
}

/// Runs the CLI with explicit arguments (including the program name) and
/// output streams; returns the exit status.
pub fn run_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args: Vec<OsString> = args.into_iter().collect();
    let (command, common) = match parse_args(&args) {
        Ok(parsed) => parsed,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if common.jobs == 0 {
        let _ = writeln!(err, "error: --jobs must be at least 1");
        return 2;
    }

    let process = |path: &PathBuf| execute(command, &common, path);
    let results: Vec<Result<Report>> = if common.jobs > 1 && common.files.len() > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(common.jobs).build() {
            Ok(pool) => pool.install(|| common.files.par_iter().map(process).collect()),
            Err(_) => common.files.iter().map(process).collect(),
        }
    } else {
        common.files.iter().map(process).collect()
    };

    let mut status = 0;
    let many = common.files.len() > 1;
    let mut docs = Vec::new();
    for (path, result) in common.files.iter().zip(results) {
        match result {
            Ok(report) => {
                if common.json {
                    let mut doc = report.json;
                    if let Value::Object(map) = &mut doc {
                        map.insert("file".into(), json!(path.display().to_string()));
                    }
                    docs.push(doc);
                } else {
                    if many {
                        let _ = writeln!(out, "== {} ==", path.display());
                    }
                    let _ = write!(out, "{}", report.text);
                }
            }
            Err(e) => {
                status = 1;
                let _ = writeln!(err, "{}: {e}", path.display());
            }
        }
    }
    if common.json && !docs.is_empty() {
        let doc = if many { Value::Array(docs) } else { docs.pop().unwrap() };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
    status
}

/// Runs the CLI on the process arguments and standard streams.
pub fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn parse_args(args: &[OsString]) -> std::result::Result<(Command, Common), clap::Error> {
    let cli = Cli::try_parse_from(args)?;
    Ok(match cli.group {
        Group::Poly { cmd } => {
            let (op, c) = cmd.split();
            (Command::Poly(op), c)
        }
        Group::Cy { cmd } => {
            let (op, c) = cmd.split();
            (Command::Cy(op), c)
        }
        Group::Fan { cmd } => {
            let (op, c) = cmd.split();
            (Command::Fan(op), c)
        }
        Group::Chern { cmd } => {
            let (op, c) = cmd.split();
            (Command::Chern(op), c)
        }
    })
}

fn execute(command: Command, opts: &Common, path: &Path) -> Result<Report> {
    let points: Vec<MPoint> = read_polytope(path)?;
    match command {
        Command::Poly(cmd) => poly(cmd, &points),
        Command::Cy(cmd) => cy(cmd, &pair_of(&points)?),
        Command::Fan(cmd) => fan(cmd, opts, &pair_of(&points)?),
        Command::Chern(cmd) => chern(cmd, opts, &pair_of(&points)?),
    }
}

fn pair_of(points: &[MPoint]) -> Result<ReflexivePair<M>> {
    ReflexivePair::new(hull(points)?)
}

fn q(x: &BigRational) -> Value {
    json!(x.to_string())
}

fn big(x: &BigInt) -> Value {
    json!(x.to_string())
}

fn poly(cmd: PolyOp, points: &[MPoint]) -> Result<Report> {
    if cmd == PolyOp::Dump {
        return Ok(Report {
            text: format_polytope(points),
            json: json!({ "points": points.iter().map(ToString::to_string).collect::<Vec<_>>() }),
        });
    }
    let p: Polytope<M> = hull(points)?;
    match cmd {
        PolyOp::Check => {
            let origin_interior = p.has_interior_origin();
            let reflexive = origin_interior && p.is_reflexive()?;
            Ok(Report {
                text: format!(
                    "reflexive: {reflexive}, dim {}, vertices {}\n",
                    p.dim(),
                    p.vertices().len()
                ),
                json: json!({
                    "reflexive": reflexive,
                    "origin_interior": origin_interior,
                    "dim": p.dim(),
                    "vertices": p.vertices().len(),
                    "facets": p.facets().len(),
                }),
            })
        }
        PolyOp::Dual => {
            let d = p.dual()?;
            let verts: Vec<String> = d.vertices().iter().map(ToString::to_string).collect();
            let mut text = format!("dual vertices {} (integral: {})\n", verts.len(), d.is_integral());
            for v in &verts {
                writeln!(text, "{v}").unwrap();
            }
            Ok(Report {
                text,
                json: json!({ "dual_vertices": verts, "integral": d.is_integral() }),
            })
        }
        PolyOp::Points => {
            let c = p.lattice_points();
            let mut by_dim = vec![0usize; p.dim()];
            for (_, _, face) in c.boundary_points() {
                by_dim[p.face(face).dim] += 1;
            }
            let mut text = format!("l {}, interior {}, boundary {}\n", c.total(), c.interior(), c.boundary());
            for (d, k) in by_dim.iter().enumerate() {
                writeln!(text, "interior to {d}-faces: {k}").unwrap();
            }
            Ok(Report {
                text,
                json: json!({
                    "l": c.total(),
                    "l_star": c.interior(),
                    "boundary": c.boundary(),
                    "by_face_dim": by_dim,
                    "points": c.points().iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            })
        }
        PolyOp::Faces => {
            let f = p.f_vector();
            let mut text = format!(
                "f-vector: {}\n",
                f.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            );
            let mut faces = Vec::new();
            for (id, face) in p.faces().iter() {
                let data = p.face_data(id);
                writeln!(
                    text,
                    "dim {} vertices {:?} l {} l* {}",
                    face.dim, face.vertices, data.l, data.l_star
                )
                .unwrap();
                faces.push(json!({
                    "dim": face.dim,
                    "vertices": face.vertices,
                    "l": data.l,
                    "l_star": data.l_star,
                }));
            }
            Ok(Report {
                text,
                json: json!({ "f_vector": f, "faces": faces }),
            })
        }
        PolyOp::Dump => unreachable!(),
    }
}

fn cy(cmd: CyOp, pair: &ReflexivePair<M>) -> Result<Report> {
    let report = HodgeReport::compute(pair)?;
    let census = &report.census;
    let census_json = json!({
        "a": census.a(),
        "e_divisors": census.e_divisors.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "f_divisors": census.f_divisors.iter().map(|f| json!({
            "point": f.point.to_string(),
            "components": f.components,
        })).collect::<Vec<_>>(),
        "skipped": census.skipped.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "components": census.components(),
        "relation_dim": census.relation_dim,
    });
    match cmd {
        CyOp::Hodge => {
            let t = report.terms;
            let text = format!(
                "h11={}, h12={}, euler={}\nh11 = {} - 5 - {} + {}\n",
                report.h11, report.h12, report.euler, t.points, t.facet_interior, t.two_face_correction
            );
            Ok(Report {
                text,
                json: json!({
                    "h11": report.h11,
                    "h12": report.h12,
                    "euler": report.euler,
                    "terms": {
                        "points": t.points,
                        "facet_interior": t.facet_interior,
                        "two_face_correction": t.two_face_correction,
                    },
                    "census": census_json,
                }),
            })
        }
        CyOp::Census => {
            let points = classify_boundary(pair.dual())?;
            let [t3, t2, t1, t0] = type_counts(&points);
            let mut text = format!(
                "vertex {t0}, interior-1-face {t1}, interior-2-face {t2}, interior-3-face {t3}\n\
                 a = {}, F-divisors {}, components {}, h11 = {}\n",
                census.a(),
                census.f_divisors.len(),
                census.components(),
                census.h11()
            );
            for p in &points {
                writeln!(text, "{} {}", p.point, p.kind.name()).unwrap();
            }
            Ok(Report {
                text,
                json: json!({
                    "types": {
                        PointType::Vertex.name(): t0,
                        PointType::Interior1Face.name(): t1,
                        PointType::Interior2Face.name(): t2,
                        PointType::Interior3Face.name(): t3,
                    },
                    "census": census_json,
                }),
            })
        }
    }
}

fn chosen_fan(opts: &Common, pair: &ReflexivePair<M>, resolve: bool) -> Result<Fan<N>> {
    if resolve {
        mpcp_triangulate(pair, opts.order.into())
    } else {
        Ok(face_fan(pair))
    }
}

fn fan_summary(f: &Fan<N>) -> (String, Value) {
    let kind = match f.kind() {
        FanKind::FaceFan => "face-fan",
        FanKind::Refinement => "mpcp",
    };
    let total = f.total_multiplicity();
    let mut text = format!(
        "{kind}: rays {}, maximal cones {}, simplicial {}, walls {} (consistent: {})\n",
        f.rays().len(),
        f.maximal_cones().len(),
        f.is_simplicial(),
        f.walls().len(),
        f.walls_are_consistent()
    );
    if let Some(t) = &total {
        writeln!(text, "total multiplicity {t}").unwrap();
    }
    let json = json!({
        "fan": {
            "kind": kind,
            "rays": f.rays().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "max_cones": f.maximal_cones().len(),
            "cones": f.maximal_cones().iter().map(|c| c.rays.clone()).collect::<Vec<_>>(),
            "simplicial": f.is_simplicial(),
            "walls": f.walls().len(),
            "walls_consistent": f.walls_are_consistent(),
            "total_multiplicity": total.as_ref().map(big),
        }
    });
    (text, json)
}

fn fan(cmd: FanOp, opts: &Common, pair: &ReflexivePair<M>) -> Result<Report> {
    let resolve = opts.resolve || cmd == FanOp::Mpcp;
    let f = chosen_fan(opts, pair, resolve)?;
    match cmd {
        FanOp::Build | FanOp::Mpcp => {
            let (text, json) = fan_summary(&f);
            Ok(Report { text, json })
        }
        FanOp::Singular => {
            let sing = singularity_census(&f)?;
            let mut text = format!("singular cones {}\n", sing.len());
            let mut list = Vec::new();
            for s in &sing {
                let rays: Vec<String> = f.cone_rays(&f.maximal_cones()[s.cone]).iter().map(ToString::to_string).collect();
                writeln!(text, "mult {} cone {}", s.mult, rays.join(" ")).unwrap();
                list.push(json!({ "mult": big(&s.mult), "rays": rays }));
            }
            Ok(Report {
                text,
                json: json!({ "singular": list }),
            })
        }
        FanOp::Picard => {
            let rank = picard_rank_q(&f);
            Ok(Report {
                text: format!("picard rank {rank}\n"),
                json: json!({ "picard_rank": rank, "rays": f.rays().len(), "max_cones": f.maximal_cones().len() }),
            })
        }
        FanOp::Nef => {
            let expr = opts.divisor.as_deref().unwrap_or("-K");
            let d = parse_divisor(expr, &f)?;
            let index = qcartier_data(&f, &d)?.ok_or(Error::NotQCartier)?.index;
            let nef = is_nef(&f, &d)?;
            Ok(Report {
                text: format!("divisor {d}\nq-cartier: true, cartier index {index}\nnef: {nef}\n"),
                json: json!({
                    "divisor": d.coeffs().iter().map(q).collect::<Vec<_>>(),
                    "qcartier": true,
                    "cartier_index": big(&index),
                    "nef": nef,
                }),
            })
        }
    }
}

fn chern(cmd: ChernOp, opts: &Common, pair: &ReflexivePair<M>) -> Result<Report> {
    let f = mpcp_triangulate(pair, opts.order.into())?;
    match cmd {
        ChernOp::C2 => {
            let form = IntersectionForm::new(&f)?;
            let values = form.c2_functional()?;
            let tests = match &opts.divisor {
                Some(expr) => vec![(expr.clone(), parse_divisor(expr, &f)?)],
                None => candidate_classes(f.rays().len()),
            };
            let extra = ChernReport::compute(pair, &f, &tests)?;
            let mut text = format!("c2.(-K) = {}\n", extra.c2_anticanonical);
            let mut vals = Vec::new();
            for (r, v) in f.rays().iter().zip(&values) {
                writeln!(text, "c2.D{} = {v}", r).unwrap();
                vals.push(json!({ "ray": r.to_string(), "value": q(v) }));
            }
            let mut checks = Vec::new();
            for c in &extra.positivity {
                writeln!(
                    text,
                    "nef {}: degree {}, c2 {} ({})",
                    c.label,
                    c.degree,
                    c.c2,
                    if c.holds() { "ok" } else { "VIOLATION" }
                )
                .unwrap();
                checks.push(json!({
                    "label": c.label,
                    "degree": q(&c.degree),
                    "c2": q(&c.c2),
                    "holds": c.holds(),
                }));
            }
            let divisor_value = match &opts.divisor {
                Some(expr) => {
                    let d = parse_divisor(expr, &f)?;
                    let v: BigRational = values.iter().zip(d.coeffs()).map(|(a, b)| a * b).sum();
                    writeln!(text, "c2.({expr}) = {v}").unwrap();
                    Some(q(&v))
                }
                None => None,
            };
            Ok(Report {
                text,
                json: json!({
                    "c2": {
                        "values": vals,
                        "anticanonical": q(&extra.c2_anticanonical),
                        "divisor": divisor_value,
                    },
                    "positivity": checks,
                }),
            })
        }
        ChernOp::Curves => {
            let census = curve_census(pair, &f)?;
            let mut counts = std::collections::BTreeMap::<&str, usize>::new();
            let mut text = String::new();
            let mut entries = Vec::new();
            for e in &census.entries {
                *counts.entry(e.class.name()).or_default() += 1;
                let [a, b] = e.edge;
                let comps = match e.class {
                    CurveClass::RationalCurves { components } => Some(components),
                    _ => None,
                };
                writeln!(
                    text,
                    "{} {} face-dim {} {}{}",
                    f.rays()[a],
                    f.rays()[b],
                    e.face_dim,
                    e.class.name(),
                    comps.map(|c| format!(" x{c}")).unwrap_or_default()
                )
                .unwrap();
                entries.push(json!({
                    "edge": [f.rays()[a].to_string(), f.rays()[b].to_string()],
                    "face_dim": e.face_dim,
                    "class": e.class.name(),
                    "components": comps,
                }));
            }
            let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
            let head = format!(
                "edges {}: {}\nuncovered basis divisors {}\n",
                census.entries.len(),
                summary.join(", "),
                census.uncovered_basis.len()
            );
            Ok(Report {
                text: head + &text,
                json: json!({
                    "edges": entries,
                    "counts": counts,
                    "covered": census.covered.len(),
                    "uncovered_basis": census.uncovered_basis,
                }),
            })
        }
    }
}

/// Parses `-K`, `3=1/2`, `(1,0,0,0)=-2` and comma-separated sums thereof.
pub fn parse_divisor(expr: &str, fan: &Fan<N>) -> Result<WeilDivisor> {
    let nrays = fan.rays().len();
    let mut d = WeilDivisor::zero(nrays);
    for term in split_terms(expr) {
        let term = term.trim();
        if term.is_empty() {
            continue;
        }
        if term == "-K" {
            d = &d + &WeilDivisor::anticanonical(nrays);
            continue;
        }
        let (ray, coeff) = term
            .rsplit_once('=')
            .ok_or_else(|| ParseError::new(format!("divisor term `{term}` is not `<ray>=<coeff>`")))?;
        let coeff: BigRational = coeff
            .trim()
            .parse()
            .map_err(|_| ParseError::new(format!("`{coeff}` is not a rational number")))?;
        let ray = ray.trim();
        let idx = if ray.starts_with('(') {
            let inner = ray.trim_start_matches('(').trim_end_matches(')');
            let coords: Vec<BigInt> = inner
                .split(',')
                .map(|s| s.trim().parse::<BigInt>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| ParseError::new(format!("`{ray}` is not an integer vector")))?;
            fan.ray_index(&NPoint::new(coords))
                .ok_or_else(|| Error::UnknownRay(ray.to_string()))?
        } else {
            let i: usize = ray
                .parse()
                .map_err(|_| ParseError::new(format!("`{ray}` is not a ray index")))?;
            if i >= nrays {
                return Err(Error::UnknownRay(ray.to_string()));
            }
            i
        };
        d = &d + &WeilDivisor::ray(nrays, idx).scale(&coeff);
    }
    Ok(d)
}

/// Splits on commas outside parentheses.
fn split_terms(expr: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in expr.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&expr[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&expr[start..]);
    out
}
