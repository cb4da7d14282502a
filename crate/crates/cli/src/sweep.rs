//! Batch scans over (field, omega) with an on-disk, content-addressed result cache.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use quandle_homotopy::cocycles::{build_basis, AlexanderField};
use quandle_homotopy::field::{Field, FieldElement, FqSpec};
use quandle_homotopy::homotopy::pi2_dim_mod_p;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "QHOM_CACHE_DIR";

/// Largest field order a sweep will touch.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    record: Value,
    sha256: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub struct Cache {
    dir: PathBuf,
    pub hits: usize,
    pub corrupt: Vec<String>,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf(), hits: 0, corrupt: Vec::new() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key.as_bytes())))
    }

    /// The stored record, or None when absent. Entries whose key or checksum do not
    /// match are recorded as corrupt and treated as absent.
    pub fn get(&mut self, key: &str) -> Option<Value> {
        let path = self.path(key);
        let text = std::fs::read_to_string(&path).ok()?;
        let ok = serde_json::from_str::<Entry>(&text)
            .ok()
            .filter(|e| e.key == key && e.sha256 == digest(e.record.to_string().as_bytes()));
        match ok {
            Some(e) => {
                self.hits += 1;
                Some(e.record)
            }
            None => {
                self.corrupt.push(path.display().to_string());
                None
            }
        }
    }

    pub fn put(&self, key: &str, record: &Value) -> Result<()> {
        let entry =
            Entry { key: key.to_string(), record: record.clone(), sha256: digest(record.to_string().as_bytes()) };
        let path = self.path(key);
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&entry)?)?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}

/// One (field, omega) pair to scan.
pub struct Job {
    pub spec: FqSpec,
    pub omega: FieldElement,
    pub key: String,
}

pub fn jobs(primes: &[u64], degrees: &[u32]) -> Result<Vec<Job>> {
    let mut out = Vec::new();
    for &p in primes {
        for &h in degrees {
            if p.checked_pow(h).is_none_or(|q| q > MAX_ORDER) {
                bail!("field of order {p}^{h} is beyond the sweep bound {MAX_ORDER}");
            }
            let spec = FqSpec::new(p, h, None)?;
            let field = Field::new(spec.clone());
            for w in field.elements().filter(|&w| w != field.zero() && w != field.one()) {
                let key = format!("gf:{spec}:omega={}", field.format(w));
                out.push(Job { spec: spec.clone(), omega: w, key });
            }
        }
    }
    Ok(out)
}

pub fn compute(job: &Job) -> Result<Value> {
    let field = Field::new(job.spec.clone());
    let s = AlexanderField::new(field.clone(), job.omega)?;
    let basis = build_basis(&s);
    let (p, h) = (s.p(), s.h());
    let mut counts = std::collections::BTreeMap::new();
    for m in &basis.members {
        *counts.entry(m.family.kind()).or_insert(0usize) += 1;
    }
    // omega^(1 + p + ... + p^(h-1)) = 1: the norm of omega is 1
    let norm_one = s.root(s.p_powers().iter().sum());
    // omega^(1 + p + p^2) = 1, the degree-three condition, reported at every h
    let cubic_norm_one = s.root(1 + p + p * p);
    let pi2 = match pi2_dim_mod_p(p, basis.b2, basis.b3) {
        Ok(d) => json!(d),
        Err(_) => Value::Null,
    };
    Ok(json!({
        "spec": job.key,
        "p": p,
        "h": h,
        "q": s.q(),
        "omega": field.format(job.omega),
        "omega_order": field.element_order(job.omega)?,
        "norm_one": norm_one,
        "cubic_norm_one": cubic_norm_one,
        "b2": basis.b2,
        "b3": basis.b3,
        "pi2_dim_mod_p": pi2,
        "counts": counts,
        "count_only": basis.count_only(),
    }))
}

/// Records in job order. Jobs are split across threads; results are reassembled by index.
pub fn run(jobs: &[Job], cache: &mut Option<Cache>) -> Result<Vec<Value>> {
    let mut out: Vec<Option<Value>> = vec![None; jobs.len()];
    if let Some(c) = cache.as_mut() {
        for (slot, job) in out.iter_mut().zip(jobs) {
            *slot = c.get(&job.key);
        }
    }
    let todo: Vec<usize> = (0..jobs.len()).filter(|&i| out[i].is_none()).collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(todo.len().max(1));
    let computed: Vec<(usize, Result<Value>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let todo = &todo;
                scope.spawn(move || {
                    todo.iter().skip(t).step_by(threads).map(|&i| (i, compute(&jobs[i]))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    for (i, r) in computed {
        let r = r.with_context(|| jobs[i].key.clone())?;
        if let Some(c) = cache.as_ref() {
            c.put(&jobs[i].key, &r)?;
        }
        out[i] = Some(r);
    }
    Ok(out.into_iter().map(|r| r.expect("every job filled")).collect())
}
