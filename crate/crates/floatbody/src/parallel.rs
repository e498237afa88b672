//! Rayon drivers for the oracle and constancy checks.
//!
//! Work is split into the core crate's fixed index blocks and reduced in
//! block order, so the thread count never changes a result.

use floatbody_core::flotation::{
    ConstancyReport, FlotationSurface, check_pairing, constancy_sample, tangent_box, tangent_cut,
};
use floatbody_core::oracle::{
    CentroidEstimate, MomentSums, OracleEstimate, SectionSampler, VolumeSampler, chunks,
};
use floatbody_core::{Hyperplane, QuadricBody, Result};
use rayon::prelude::*;

pub fn mc_volume(body: &QuadricBody, plane: &Hyperplane, samples: u64, seed: u64) -> Result<OracleEstimate> {
    let sampler = VolumeSampler::new(body, plane)?;
    let blocks: Vec<_> = chunks(samples).collect();
    let hits: u64 = blocks.into_par_iter().map(|r| sampler.hits(seed, r)).sum();
    sampler.estimate(hits, samples, seed)
}

pub fn mc_section_centroid(
    body: &QuadricBody,
    plane: &Hyperplane,
    samples: u64,
    seed: u64,
) -> Result<CentroidEstimate> {
    let sampler = SectionSampler::new(body, plane)?;
    let blocks: Vec<_> = chunks(samples).collect();
    let partial = blocks
        .into_par_iter()
        .map(|r| sampler.accumulate(seed, r))
        .collect::<Result<Vec<_>>>()?;
    let mut total = MomentSums::new(body.dim().ambient());
    for p in &partial {
        total.merge(p);
    }
    sampler.estimate(&total, seed)
}

pub fn verify_constancy(
    body: &QuadricBody,
    surface: &FlotationSurface,
    samples: u64,
    seed: u64,
) -> Result<ConstancyReport> {
    check_pairing(body, surface)?;
    let reference = tangent_cut(body, surface, &vec![0.0; body.dim().n()], 0)?.volume;
    let widths = tangent_box(body, surface);
    let drawn = (0..samples)
        .into_par_iter()
        .map(|i| constancy_sample(body, surface, &widths, seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstancyReport::new(reference, drawn))
}

/// Runs `f` on a pool of `threads` workers (0 means rayon's default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
