//! The whole pipeline in one call, with a serializable report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cubes::{check_c3, enumerate_cubes, C3Report, CubeSet};
use crate::error::Result;
use crate::homology::{
    boundary_snfs, build_chain_complex, homology_from_boundaries, smith_normal_form_with_transforms, AbelianGroup,
    ChainComplex, SnfResult,
};
use crate::ktheory::{identity_order_bounds, ktheory_report, IdentityOrderBounds, KTheoryInput, KTheoryReport};
use crate::presentation::{verify_vh_axioms, AxiomReport, Presentation};
use crate::rank_graph::{adjacency_matrices, validate_k_graph, AdjacencyMatrices, KGraphReport, UceMode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSummary {
    pub name: String,
    pub k: usize,
    pub sizes: Vec<usize>,
    pub generators: usize,
    pub relators: usize,
}

impl PresentationSummary {
    pub fn new(p: &Presentation) -> Self {
        PresentationSummary {
            name: p.name.clone(),
            k: p.k(),
            sizes: p.sizes(),
            generators: p.generator_count(),
            relators: p.relators.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Ok,
    AxiomFailure,
    C3Failure,
    NotKGraph,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub tool_version: String,
    pub input_hash: Option<String>,
    pub seed: Option<u64>,
    pub status: Status,
    pub presentation: PresentationSummary,
    pub axioms: AxiomReport,
    pub c3: Option<C3Report>,
    /// |S_n| for n = 1..=k
    pub cube_counts: Vec<usize>,
    pub kgraph: Option<KGraphReport>,
    pub homology: Option<Vec<AbelianGroup>>,
    pub identity: Option<IdentityOrderBounds>,
    pub ktheory: Option<KTheoryReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub uce: UceMode,
    pub kunneth: KTheoryInput,
    pub timings: bool,
    /// Stop after this stage: "verify", "cubes", "kgraph", "homology", or run everything.
    pub stop_after: Option<String>,
}

/// Intermediate results kept for dumping.
#[derive(Clone, Debug, Default)]
pub struct PipelineArtifacts {
    pub cubes: Option<CubeSet>,
    pub matrices: Option<AdjacencyMatrices>,
    pub complex: Option<ChainComplex>,
    pub snfs: Vec<SnfResult>,
}

struct Clock {
    on: bool,
    start: Instant,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn lap(&mut self, name: &str) {
        if self.on {
            self.laps.insert(name.into(), self.start.elapsed().as_secs_f64());
            self.start = Instant::now();
        }
    }
}

pub fn run_pipeline(p: &Presentation, opts: &PipelineOptions) -> Result<(PipelineReport, PipelineArtifacts)> {
    let mut clock = Clock {
        on: opts.timings,
        start: Instant::now(),
        laps: BTreeMap::new(),
    };
    let seed = match opts.uce {
        UceMode::Sample { seed, .. } => Some(seed),
        UceMode::Exhaustive => None,
    };
    let stop = |s: &str| opts.stop_after.as_deref() == Some(s);
    let mut art = PipelineArtifacts::default();
    let mut report = PipelineReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        input_hash: None,
        seed,
        status: Status::Ok,
        presentation: PresentationSummary::new(p),
        axioms: verify_vh_axioms(p),
        c3: None,
        cube_counts: Vec::new(),
        kgraph: None,
        homology: None,
        identity: None,
        ktheory: None,
        timings: None,
    };
    clock.lap("verify");
    let finish = |mut r: PipelineReport, clock: Clock, art| {
        if clock.on {
            r.timings = Some(clock.laps);
        }
        Ok((r, art))
    };
    if !report.axioms.passed() {
        report.status = Status::AxiomFailure;
        return finish(report, clock, art);
    }
    let c3 = check_c3(p);
    let c3_pass = c3.pass;
    report.c3 = Some(c3);
    if !c3_pass {
        report.status = Status::C3Failure;
        return finish(report, clock, art);
    }
    if stop("verify") {
        return finish(report, clock, art);
    }
    let k = p.k();
    for n in 1..k {
        report.cube_counts.push(enumerate_cubes(p, n)?.len());
    }
    let cubes = enumerate_cubes(p, k)?;
    report.cube_counts.push(cubes.len());
    clock.lap("cubes");
    if stop("cubes") {
        art.cubes = Some(cubes);
        return finish(report, clock, art);
    }
    let m = adjacency_matrices(&cubes, &p.sizes())?;
    art.cubes = Some(cubes);
    let kg = validate_k_graph(&m, opts.uce);
    let ok = kg.is_k_graph;
    report.kgraph = Some(kg);
    clock.lap("kgraph");
    if !ok {
        report.status = Status::NotKGraph;
        art.matrices = Some(m);
        return finish(report, clock, art);
    }
    if stop("kgraph") {
        art.matrices = Some(m);
        return finish(report, clock, art);
    }
    let c = build_chain_complex(k, &m)?;
    art.matrices = Some(m);
    c.verify_chain()?;
    let mut snfs = boundary_snfs(&c, false);
    snfs[0] = smith_normal_form_with_transforms(&c.boundaries[0]);
    let h = homology_from_boundaries(&c.dims(), &snfs);
    report.identity = Some(identity_order_bounds(&p.sizes(), &snfs[0])?);
    report.homology = Some(h.clone());
    art.complex = Some(c);
    art.snfs = snfs;
    clock.lap("homology");
    if stop("homology") {
        return finish(report, clock, art);
    }
    report.ktheory = Some(ktheory_report(&h, &opts.kunneth));
    clock.lap("ktheory");
    finish(report, clock, art)
}
