use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cubekit::cellular::{barycentric_subdivision, build_cube_complex, cellular_report};
use cubekit::covers::{cover_ktheory, random_cover_check, CoverSpec};
use cubekit::homology::AbelianGroup;
use cubekit::ktheory::KTheoryInput;
use cubekit::presentation::{parse_presentation, Presentation};
use cubekit::rank_graph::UceMode;
use cubekit::report::{run_pipeline, PipelineArtifacts, PipelineOptions, PipelineReport, Status};
use cubekit::fixtures::{builtin, builtin_names, builtin_text};

#[derive(Parser)]
#[command(name = "cubekit", version, about = "k-cube groups, their k-rank graphs, homology and K-theory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Input {
    /// Presentation file (JSON).
    file: Option<PathBuf>,
    /// Load a shipped presentation instead (see `cubekit list`).
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Clone, Default)]
struct PipelineFlags {
    #[arg(long)]
    exhaustive_uce: bool,
    /// Sampled UCE triples.
    #[arg(long, default_value_t = 1000)]
    uce_samples: usize,
    #[arg(long, value_name = "DIR")]
    dump_matrices: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    dump_snf: Option<PathBuf>,
    #[arg(long, value_name = "EXPR")]
    kunneth_k0: Option<String>,
    #[arg(long, value_name = "EXPR")]
    kunneth_k1: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the square axioms and the cube condition.
    Verify {
        #[command(flatten)]
        input: Input,
    },
    /// Count pointed n-cubes.
    Cubes {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dim: Option<usize>,
        /// Print every cube's edge labels.
        #[arg(long)]
        list: bool,
    },
    /// Build and validate the k-rank graph.
    Kgraph {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Homology of the k-rank graph.
    Homology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// K-theory report.
    Ktheory {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Homology of the cube complex through its barycentric subdivision.
    Cellular {
        #[command(flatten)]
        input: Input,
        /// Write simplex counts and boundary matrices.
        #[arg(long, value_name = "DIR")]
        dump_complex: Option<PathBuf>,
    },
    /// Double-cover graphs on two vertices.
    Cover {
        /// e.g. "T:3,D:2,D:4"
        #[arg(long, required_unless_present = "random")]
        spec: Option<String>,
        #[arg(long)]
        k_theory: bool,
        /// Check this many random specs of the given rank instead.
        #[arg(long, value_name = "K")]
        random: Option<usize>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_param: u64,
    },
    /// Every stage, one PipelineReport.
    All {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Names accepted by --builtin.
    List,
}

struct Loaded {
    p: Presentation,
    hash: String,
}

fn load(input: &Input) -> Result<Loaded> {
    let (text, p) = match (&input.file, &input.builtin) {
        (Some(_), Some(_)) => bail!("give either FILE or --builtin, not both"),
        (None, None) => bail!("no input: give FILE or --builtin NAME"),
        (Some(f), None) => {
            let t = fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            let p = parse_presentation(&t)?;
            (t, p)
        }
        (None, Some(name)) => {
            let p = builtin(name)?;
            (builtin_text(name).map(str::to_string).unwrap_or_else(|| name.clone()), p)
        }
    };
    Ok(Loaded {
        p,
        hash: hex::encode(Sha256::digest(text.as_bytes())),
    })
}

fn kunneth(flags: &PipelineFlags) -> Result<KTheoryInput> {
    let parse = |e: &Option<String>| -> Result<Option<AbelianGroup>> {
        e.as_deref()
            .map(|s| s.parse::<AbelianGroup>().map_err(|e| anyhow::anyhow!("bad group `{s}`: {e}")))
            .transpose()
    };
    Ok(KTheoryInput {
        k0: parse(&flags.kunneth_k0)?,
        k1: parse(&flags.kunneth_k1)?,
    })
}

fn options(cli: &Cli, flags: &PipelineFlags, stop: Option<&str>) -> Result<PipelineOptions> {
    Ok(PipelineOptions {
        uce: if flags.exhaustive_uce {
            UceMode::Exhaustive
        } else {
            UceMode::Sample {
                count: flags.uce_samples,
                seed: cli.seed,
            }
        },
        kunneth: kunneth(flags)?,
        timings: cli.timings,
        stop_after: stop.map(str::to_string),
    })
}

fn write_dir(dir: &Path, name: &str, body: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn dump(flags: &PipelineFlags, art: &PipelineArtifacts) -> Result<()> {
    if let (Some(dir), Some(m)) = (&flags.dump_matrices, &art.matrices) {
        for (i, mi) in m.matrices.iter().enumerate() {
            write_dir(dir, &format!("M{}.txt", i + 1), &mi.to_text())?;
        }
    }
    if let Some(dir) = &flags.dump_snf {
        for (i, s) in art.snfs.iter().enumerate() {
            let body: String = s.divisors.iter().map(|d| format!("{d}\n")).collect();
            write_dir(dir, &format!("d{}.txt", i + 1), &body)?;
        }
    }
    Ok(())
}

fn bool_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn text_verify(r: &PipelineReport, out: &mut String) {
    let p = &r.presentation;
    let _ = writeln!(out, "presentation {} (k = {}, sizes {:?}, {} relators)", p.name, p.k, p.sizes, p.relators);
    let a = &r.axioms;
    let _ = writeln!(
        out,
        "axioms: C1 {}, C2 {}, C1' {}, sizes >= 4 {}",
        bool_word(a.c1_pass),
        bool_word(a.c2_pass),
        bool_word(a.c1prime_pass),
        bool_word(a.thick)
    );
    for c in &a.component_sizes {
        let _ = writeln!(out, "  |F({},{})| = {} (expected {})", c.p, c.q, c.size, c.expected);
    }
    for w in &a.witnesses {
        let _ = writeln!(out, "  witness [{}] {}", w.axiom, w.detail);
    }
    for w in &a.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    if let Some(c3) = &r.c3 {
        let _ = writeln!(out, "C3: {}", bool_word(c3.pass));
        for d in &c3.dimensions {
            let _ = writeln!(out, "  n = {}: {} cubes (expected {}), failed corners {}", d.n, d.cubes, d.expected, d.failed_corners);
            for w in &d.witnesses {
                let _ = writeln!(out, "    witness {w}");
            }
        }
    }
}

fn text_pipeline(r: &PipelineReport, out: &mut String) {
    let _ = writeln!(out, "cubekit {}  input {}", r.tool_version, r.input_hash.as_deref().unwrap_or("-"));
    text_verify(r, out);
    if !r.cube_counts.is_empty() {
        let _ = writeln!(out, "cube counts |S_n|, n = 1..: {:?}", r.cube_counts);
    }
    if let Some(kg) = &r.kgraph {
        let _ = writeln!(out, "k-graph on {} vertices: {}", kg.vertices, bool_word(kg.is_k_graph));
        let _ = writeln!(
            out,
            "  nonzero {}, commuting {}, 0/1 {}, UCE {} ({:?}, {} checked), row condition {}",
            bool_word(kg.nonzero_pass),
            bool_word(kg.commutation_pass),
            bool_word(kg.zero_one_pass),
            bool_word(kg.uce_pass),
            kg.uce.mode,
            kg.uce.checked,
            bool_word(kg.row_condition_pass)
        );
        if let Some(c) = kg.column_sum_pass {
            let _ = writeln!(out, "  column sums |E_i| - 1: {}", bool_word(c));
        }
        let _ = writeln!(out, "  connected {}, aperiodic {:?}", kg.connected, kg.aperiodic);
        for w in &kg.witnesses {
            let _ = writeln!(out, "  witness {w}");
        }
    }
    if let Some(h) = &r.homology {
        for (i, g) in h.iter().enumerate() {
            let _ = writeln!(out, "H_{i} = {g}");
        }
    }
    if let Some(id) = &r.identity {
        let _ = writeln!(
            out,
            "identity order: {} (rho = {}, case {:?}, divides rho: {})",
            id.computed_order, id.rho, id.case, id.divides_rho
        );
    }
    if let Some(k) = &r.ktheory {
        let _ = write!(out, "{k}");
    }
    if let Some(t) = &r.timings {
        for (stage, secs) in t {
            let _ = writeln!(out, "time {stage}: {secs:.3}s");
        }
    }
}

fn exit_for(r: &PipelineReport) -> u8 {
    match r.status {
        Status::Ok => 0,
        _ => 2,
    }
}

fn emit(cli: &Cli, text: String, value: Value) -> Result<()> {
    let body = match cli.format {
        Format::Text => text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value)?;
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(f) => fs::write(f, body).with_context(|| format!("writing {}", f.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pipeline(cli: &Cli, input: &Input, flags: &PipelineFlags, stop: Option<&str>) -> Result<u8> {
    let l = load(input)?;
    let (mut r, art) = run_pipeline(&l.p, &options(cli, flags, stop)?)?;
    r.input_hash = Some(l.hash);
    dump(flags, &art)?;
    let mut text = String::new();
    text_pipeline(&r, &mut text);
    emit(cli, text, serde_json::to_value(&r)?)?;
    Ok(exit_for(&r))
}

fn cubes(cli: &Cli, input: &Input, dim: Option<usize>, list: bool) -> Result<u8> {
    let l = load(input)?;
    let k = l.p.k();
    let n = dim.unwrap_or(k);
    if n == 0 || n > k {
        bail!("--dim must be between 1 and {k}");
    }
    let opts = PipelineOptions {
        stop_after: Some("verify".into()),
        ..Default::default()
    };
    let (r, _) = run_pipeline(&l.p, &opts)?;
    if r.status != Status::Ok {
        let mut text = String::new();
        text_verify(&r, &mut text);
        emit(cli, text, serde_json::to_value(&r)?)?;
        return Ok(2);
    }
    let set = cubekit::cubes::enumerate_cubes(&l.p, n)?;
    let mut text = format!("|S_{n}| = {}\n", set.len());
    let mut labelled = Vec::new();
    if list {
        for c in &set.cubes {
            let dirs: Vec<String> = c.directions.iter().map(|d| (d + 1).to_string()).collect();
            let edges: Vec<String> = (0..n)
                .map(|t| {
                    let e: Vec<String> = (0..1usize << (n - 1)).map(|eps| l.p.literal_name(c.edge(t, eps))).collect();
                    e.join(" ")
                })
                .collect();
            let line = format!("[{}] {}", dirs.join(","), edges.join(" | "));
            let _ = writeln!(text, "{line}");
            labelled.push(line);
        }
    }
    let mut v = json!({ "n": n, "count": set.len(), "input_hash": l.hash });
    if list {
        v["cubes"] = json!(labelled);
    }
    emit(cli, text, v)?;
    Ok(0)
}

fn cellular(cli: &Cli, input: &Input, dump_complex: &Option<PathBuf>) -> Result<u8> {
    let l = load(input)?;
    let opts = PipelineOptions {
        stop_after: Some("verify".into()),
        ..Default::default()
    };
    let (r, _) = run_pipeline(&l.p, &opts)?;
    if r.status != Status::Ok {
        let mut text = String::new();
        text_verify(&r, &mut text);
        emit(cli, text, serde_json::to_value(&r)?)?;
        return Ok(2);
    }
    let rep = cellular_report(&l.p)?;
    if let Some(dir) = dump_complex {
        let s = barycentric_subdivision(&build_cube_complex(&l.p, None)?)?;
        let counts: String = s.counts().iter().map(|c| format!("{c}\n")).collect();
        write_dir(dir, "simplex_counts.txt", &counts)?;
        for (i, b) in s.boundaries.iter().enumerate() {
            write_dir(dir, &format!("boundary{}.txt", i + 1), &b.to_text())?;
        }
    }
    let mut text = String::new();
    let _ = writeln!(text, "cells per dimension: {:?} (Euler characteristic {})", rep.cell_counts, rep.euler_characteristic);
    let _ = writeln!(text, "subdivision simplices: {:?}, loop-free {}", rep.simplex_counts, rep.loop_free);
    for (i, g) in rep.homology.iter().enumerate() {
        let _ = writeln!(text, "H_{i} = {g}");
    }
    emit(cli, text, serde_json::to_value(&rep)?)?;
    Ok(0)
}

fn cover(cli: &Cli, spec: &Option<String>, k_theory: bool, random: Option<usize>, count: usize, max_param: u64) -> Result<u8> {
    if let Some(k) = random {
        let s = random_cover_check(k, count, cli.seed, max_param)?;
        let text = format!(
            "k = {}, {} random specs (seed {}): closed form {}/{}, g+ g- form {}/{}, K-theory in g {}/{}, in g+ g- {}/{}\n{}",
            s.k,
            s.specs,
            s.seed,
            s.closed_form_matches,
            s.specs,
            s.corrected_matches,
            s.specs,
            s.ktheory_matches,
            s.specs,
            s.corrected_ktheory_matches,
            s.specs,
            s.mismatches.iter().map(|m| format!("  mismatch {m}\n")).collect::<String>()
        );
        emit(cli, text, serde_json::to_value(&s)?)?;
        return Ok(0);
    }
    let spec: CoverSpec = spec.as_deref().unwrap_or_default().parse()?;
    let r = cover_ktheory(&spec)?;
    let mut text = String::new();
    let _ = writeln!(text, "spec {} (k = {}), a = {:?}, g = {}, g+ = {}, g- = {}", r.spec, r.k, r.a, r.g, r.g_plus, r.g_minus);
    for w in &r.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    for (i, m) in r.matrices.iter().enumerate() {
        let rows: Vec<String> = m.iter().map(|row| format!("{row:?}")).collect();
        let _ = writeln!(text, "M_{} = [{}]", i + 1, rows.join(", "));
    }
    for (i, g) in r.computed.homology.iter().enumerate() {
        let _ = writeln!(text, "H_{i} = {g}");
    }
    let _ = writeln!(text, "closed form in g: {}", bool_word(r.prediction_holds));
    let _ = writeln!(text, "closed form in g+ g-: {}", bool_word(r.corrected_holds));
    let mut v = serde_json::to_value(&r)?;
    if k_theory {
        if let Some(c) = &r.closed_form_ktheory {
            let _ = writeln!(text, "closed form: K_0 {}, K_1 {}", c.k0, c.k1);
            for s in &c.sequences {
                let _ = writeln!(text, "  {s}");
            }
        }
        let _ = write!(text, "{}", r.ktheory);
        let _ = writeln!(text, "closed-form K-theory consistent: {}", bool_word(r.ktheory_consistent));
    } else if let Value::Object(o) = &mut v {
        o.remove("ktheory");
        o.remove("closed_form_ktheory");
        o.remove("ktheory_consistent");
    }
    emit(cli, text, v)?;
    Ok(0)
}

fn configure_threads() -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Ok(v) = std::env::var("CUBEKIT_THREADS") {
        let n: usize = v.parse().with_context(|| format!("CUBEKIT_THREADS=`{v}` is not a number"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    configure_threads()?;
    let none = PipelineFlags::default();
    match &cli.cmd {
        Cmd::Verify { input } => pipeline(cli, input, &none, Some("verify")),
        Cmd::Cubes { input, dim, list } => cubes(cli, input, *dim, *list),
        Cmd::Kgraph { input, flags } => pipeline(cli, input, flags, Some("kgraph")),
        Cmd::Homology { input, flags } => pipeline(cli, input, flags, Some("homology")),
        Cmd::Ktheory { input, flags } | Cmd::All { input, flags } => pipeline(cli, input, flags, None),
        Cmd::Cellular { input, dump_complex } => cellular(cli, input, dump_complex),
        Cmd::Cover {
            spec,
            k_theory,
            random,
            count,
            max_param,
        } => cover(cli, spec, *k_theory, *random, *count, *max_param),
        Cmd::List => {
            let names = builtin_names();
            emit(cli, format!("{}\nfree:r1,r2,...\n", names.join("\n")), json!(names))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors exit 1; --help and --version exit 0
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
