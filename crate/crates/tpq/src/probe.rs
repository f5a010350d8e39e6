//! Randomized search for legal, locally consistent databases on which a
//! query has no answer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tpq_core::consistency::{is_locally_consistent, reduct};
use tpq_core::relational::exists;
use tpq_core::views::{is_legal, query_view_database, Legality};
use tpq_core::{Database, Query, Relation, Result, ViewSystem};

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    /// Values per attempt, named `d0`, `d1`, ...
    pub domain: usize,
    pub attempts: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            domain: 4,
            attempts: 200,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub attempts: usize,
    pub hits: usize,
    /// The first hit in attempt order: base relations plus view relations.
    pub witness: Option<Database>,
}

impl ProbeReport {
    pub fn hit_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.hits as f64 / self.attempts as f64
        }
    }
}

/// All tuples over `0..domain` of length `arity`, each kept with
/// probability `p`.
fn random_relation<R: Rng>(rng: &mut R, arity: usize, domain: usize, p: f64) -> Relation {
    let mut rel = Relation::new(arity);
    let total = domain.pow(arity as u32);
    for mut code in 0..total {
        let mut t = Vec::with_capacity(arity);
        for _ in 0..arity {
            t.push(format!("d{}", code % domain));
            code /= domain;
        }
        if rng.gen_bool(p) {
            rel.insert(t);
        }
    }
    rel
}

/// One attempt; a hit is returned as its database.
pub fn attempt(q: &Query, vs: &ViewSystem, domain: usize, seed: u64) -> Result<Option<Database>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(0.3..0.9);
    let mut base = Database::new();
    for a in q.atoms() {
        if !base.contains(&a.relation) {
            let rel = random_relation(&mut rng, a.arity(), domain, p);
            base.insert(a.relation.clone(), rel);
        }
    }
    if exists(q, &base)? {
        return Ok(None);
    }
    let mut db = base.merged(&query_view_database(q, vs, &base)?);
    let pv = rng.gen_range(0.5..1.0);
    for v in vs.views().iter().filter(|v| !v.is_query_view()) {
        db.insert(v.name.clone(), random_relation(&mut rng, v.vars.len(), domain, pv));
    }
    let red = reduct(vs, &db)?;
    if red.is_empty() {
        return Ok(None);
    }
    let hit = red.database;
    let verified = is_locally_consistent(vs, &hit)?.locally_consistent
        && is_legal(q, vs, &hit, Legality::Full)?
        && !exists(q, &hit)?;
    Ok(verified.then_some(hit))
}

/// Runs `cfg.attempts` independent attempts in parallel. Attempt `i` is
/// seeded with `cfg.seed + i`, so the report does not depend on the thread
/// count.
pub fn probe_counterexample(q: &Query, vs: &ViewSystem, cfg: ProbeConfig) -> Result<ProbeReport> {
    let results: Vec<Option<Database>> = (0..cfg.attempts)
        .into_par_iter()
        .map(|i| attempt(q, vs, cfg.domain, cfg.seed.wrapping_add(i as u64)))
        .collect::<Result<_>>()?;
    let hits = results.iter().filter(|r| r.is_some()).count();
    Ok(ProbeReport {
        attempts: cfg.attempts,
        hits,
        witness: results.into_iter().flatten().next(),
    })
}
