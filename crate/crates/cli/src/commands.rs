use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use flagperm::augment::{nonvanishing_search, Augmenter};
use flagperm::charp::{pipeline, require_equal_characteristic};
use flagperm::chevalley::{selfcheck, Chevalley, StructureConstants, UnipotentElement};
use flagperm::coeff::{CoeffSpec, Field, PrimeField, Rationals};
use flagperm::field::{Fq, FqElem};
use flagperm::flagmod::{ej_presentation, EjMode, FlagSpace};
use flagperm::modengine::{brute_force_irreducible, composition_factors, MatrixModule, ModuleFile};
use flagperm::rootsys::{self, parse_label, NodeSet, RootSystem};
use flagperm::selfenc::{closure, is_self_enclosed, orders_for, root_factor, tower, OrderPolicy, UnipotentSubgroup};
use flagperm::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::report::{cache_dir, Check, Outcome, Verdict};

/// Projective points spun by the brute-force oracle before it gives up.
pub const BRUTE_FORCE_CAP: usize = 50_000;

pub fn root_system(ty: &str, rank: Option<usize>) -> Result<Arc<RootSystem>> {
    let label = match rank {
        Some(r) if ty.chars().all(|c| c.is_ascii_alphabetic()) => format!("{ty}{r}"),
        Some(r) => {
            let (_, n) = parse_label(ty)?;
            if n != r {
                return Err(Error::Config(format!("--type {ty} conflicts with --rank {r}")));
            }
            ty.to_string()
        }
        None => ty.to_string(),
    };
    let (t, n) = parse_label(&label)?;
    Ok(Arc::new(RootSystem::new(t, n)?))
}

/// Builds the group, going through the structure-constant cache when one is configured.
pub fn group(rs: Arc<RootSystem>, q: u32) -> Result<Chevalley> {
    let fq = Fq::new(q)?;
    match cache_dir() {
        Some(dir) => {
            let sc = StructureConstants::load_or_build(&rs, &dir)?;
            Ok(Chevalley::with_constants(rs, fq, Arc::new(sc)))
        }
        None => Chevalley::new(rs, fq),
    }
}

/// `all`, `I`, `none`, or a comma list of 1-based nodes such as `1,2` or `{1}`.
pub fn parse_j(s: &str, rank: usize) -> Result<Vec<NodeSet>> {
    let t = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
    match t {
        "all" => return Ok(NodeSet::all(rank).collect()),
        "I" | "full" => return Ok(vec![NodeSet::full(rank)]),
        "" | "none" | "empty" => return Ok(vec![NodeSet::EMPTY]),
        _ => {}
    }
    let mut nodes = Vec::new();
    for part in t.split(',') {
        let k: usize = part.trim().parse().map_err(|_| Error::Config(format!("bad node '{part}' in J = {s}")))?;
        if k == 0 || k > rank {
            return Err(Error::Config(format!("node {k} outside 1..={rank}")));
        }
        nodes.push(k - 1);
    }
    Ok(vec![NodeSet::from_nodes(&nodes)])
}

pub fn covers_all(js: &[NodeSet], rank: usize) -> bool {
    js.len() == 1 << rank
}

/// Derives an independent stream per (J, trial) so that changing `--J` does
/// not reshuffle the vectors drawn for the other subsets.
pub fn trial_seed(seed: u64, j: NodeSet, trial: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(j.0.to_le_bytes());
    h.update((trial as u64).to_le_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("8 bytes"))
}

pub fn random_nonzero<F: Field, R: Rng>(f: &F, n: usize, rng: &mut R) -> Vec<F::Elem> {
    let (lo, hi) = match f.characteristic() {
        0 => (-3i64, 4i64),
        p => (0, p as i64),
    };
    loop {
        let v: Vec<F::Elem> = (0..n).map(|_| f.from_i64(rng.gen_range(lo..hi))).collect();
        if v.iter().any(|x| !f.is_zero(x)) {
            return v;
        }
    }
}

fn poincare_total(rs: &RootSystem, q: u32) -> Option<u64> {
    rs.weyl_elements().try_fold(0u64, |acc, w| acc.checked_add((q as u64).checked_pow(rs.length(w) as u32)?))
}

fn render_unipotent(u: &UnipotentElement) -> String {
    u.coords().iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(",")
}

// ---- rootsys ----

pub fn rootsys_report(rs: &RootSystem) -> Result<Outcome> {
    let report = rootsys::report(rs, 5000)?;
    let longest = rs.length(rs.longest_element());
    let mut checks = vec![
        Check::pass_if(
            "longest_length_equals_positive_roots",
            longest == rs.num_positive(),
            json!({ "longest": longest, "positive_roots": rs.num_positive() }),
        ),
        Check::pass_if(
            "simple_reflections",
            rs.weyl_elements().filter(|&w| rs.length(w) == 1).count() == rs.rank(),
            rs.rank(),
        ),
    ];
    if rs.weyl_order() <= 5000 {
        let mut bad = Vec::new();
        for j in NodeSet::all(rs.rank()) {
            let pd = rs.parabolic_data(j)?;
            if pd.x_j.len() * rs.parabolic_subgroup(j).len() != rs.weyl_order() {
                bad.push(j.to_string());
            }
        }
        checks.push(Check::pass_if("parabolic_index", bad.is_empty(), bad));
    }
    Ok(Outcome { checks, result: serde_json::to_value(report).expect("report serializes") })
}

// ---- chevalley ----

pub fn chevalley_selfcheck(g: &Chevalley, trials: usize, seed: u64) -> Result<Outcome> {
    let r = selfcheck(g, trials, seed)?;
    let mut checks = vec![
        Check::pass_if("jacobi", true, json!({ "pairs_checked": r.jacobi_pairs })),
        Check::pass_if("associativity", r.associativity_ok, r.associativity_trials),
        Check::pass_if("inverse", r.inverse_ok, r.associativity_trials),
    ];
    match r.matrix_products_ok {
        Some(ok) => checks.push(Check::pass_if("matrix_products", ok, r.associativity_trials)),
        None => checks.push(Check::new("matrix_products", Verdict::Info, "no matrix oracle outside type A")),
    }
    for c in &r.sl2 {
        checks.push(Check::pass_if(format!("sl2.node{}", c.node), c.matches == c.checked && c.f_bijective, c));
    }
    Ok(Outcome { checks, result: serde_json::to_value(&r).expect("report serializes") })
}

// ---- flagmod ----

fn flagmod_build_in<F: Field>(space: &FlagSpace, f: &F, js: &[NodeSet], mode: EjMode, cap: usize, q: u32) -> Result<Outcome> {
    let rs = space.root_system();
    let mut checks = Vec::new();
    let mut modules = Vec::new();
    let mut total = 0usize;
    for &j in js {
        let p = ej_presentation(space, f, j, mode, cap)?;
        total += p.dim();
        if let Some(c) = &p.check {
            checks.push(Check::pass_if(format!("basis.J={j}"), c.holds, c));
        }
        if let Some(agree) = p.modes_agree {
            checks.push(Check::pass_if(format!("modes_agree.J={j}"), agree, agree));
        }
        modules.push(json!({ "J": j.to_string(), "dim": p.dim() }));
    }
    let mut result = json!({ "coeff": f.label(), "modules": modules });
    if covers_all(js, rs.rank()) {
        let formula = poincare_total(rs, q);
        let ok = formula == Some(total as u64) && total == space.size();
        checks.push(Check::pass_if(
            "partition",
            ok,
            json!({ "partition_total": total, "formula_total": formula, "cosets": space.size() }),
        ));
        result["partition_total"] = json!(total);
        result["formula_total"] = json!(formula);
    }
    let mut dims: Vec<usize> = modules.iter().map(|m| m["dim"].as_u64().unwrap_or(0) as usize).collect();
    dims.sort_unstable();
    result["dims"] = json!(dims);
    Ok(Outcome { checks, result })
}

pub fn flagmod_build(g: Chevalley, coeff: &CoeffSpec, js: &[NodeSet], mode: EjMode, cap: usize) -> Result<Outcome> {
    let q = g.field().q();
    let space = FlagSpace::new(g, cap)?;
    match coeff {
        CoeffSpec::Prime(f) => flagmod_build_in(&space, f, js, mode, cap, q),
        CoeffSpec::Rational => flagmod_build_in(&space, &Rationals, js, mode, cap, q),
    }
}

// ---- selfenc ----

pub fn parse_gens(g: &Chevalley, s: &str) -> Result<Vec<UnipotentElement>> {
    let m = g.num_positive();
    let q = g.field().q();
    let mut out = Vec::new();
    for part in s.split(';').filter(|p| !p.trim().is_empty()) {
        let coords: Vec<FqElem> = part
            .split(',')
            .map(|x| {
                let n: u32 = x.trim().parse().map_err(|_| Error::Config(format!("bad coordinate '{x}'")))?;
                if n >= q {
                    return Err(Error::Config(format!("coordinate {n} is not an element of F_{q}")));
                }
                Ok(FqElem(n as u16))
            })
            .collect::<Result<_>>()?;
        if coords.len() != m {
            return Err(Error::Config(format!("generator '{part}' needs {m} coordinates")));
        }
        out.push(UnipotentElement::from_coords(coords));
    }
    Ok(out)
}

fn subgroup_checks(g: &Chevalley, h: &UnipotentSubgroup, policy: OrderPolicy, seed: u64) -> Result<(Vec<Check>, Value)> {
    let rs = g.root_system();
    let orders = orders_for(rs, policy, seed)?;
    let rep = is_self_enclosed(g, h, &orders);
    let failing: Vec<&Vec<usize>> = rep.per_order.iter().filter(|v| !v.self_enclosed).map(|v| &v.order).collect();
    let p = g.field().p();
    let factors = if rep.all { Some(root_factor(g, h)?.iter().map(|s| s.len()).collect::<Vec<_>>()) } else { None };
    let checks = vec![
        Check::pass_if("p_power_order", h.is_p_power(p), h.order()),
        Check::pass_if("self_enclosed", rep.all, json!({ "orders_checked": orders.len(), "failing": failing })),
    ];
    let result = json!({
        "order": h.order(),
        "orders_checked": orders.len(),
        "root_factor_sizes": factors,
    });
    Ok((checks, result))
}

pub fn selfenc_closure(g: &Chevalley, x: &[UnipotentElement], policy: OrderPolicy, seed: u64, cap: usize) -> Result<Outcome> {
    let h = closure(g, x, cap)?;
    let (mut checks, mut result) = subgroup_checks(g, &h, policy, seed)?;
    checks.insert(0, Check::pass_if("contains_generators", x.iter().all(|u| h.contains(u)), x.len()));
    result["generators"] = json!(x.iter().map(render_unipotent).collect::<Vec<_>>());
    Ok(Outcome { checks, result })
}

pub fn selfenc_tower(g: &Chevalley, exponents: &[u32], policy: OrderPolicy, seed: u64, cap: usize) -> Result<Outcome> {
    let h = tower(g, exponents, cap)?;
    let (checks, mut result) = subgroup_checks(g, &h, policy, seed)?;
    result["exponents"] = json!(exponents);
    Ok(Outcome { checks, result })
}

// ---- augment ----

pub struct TrialArgs {
    pub trials: usize,
    pub seed: u64,
}

fn augment_in<F: Field>(g: &Chevalley, f: &F, js: &[NodeSet], t: &TrialArgs, budget: usize) -> Result<Outcome> {
    let mut checks = Vec::new();
    let mut per_j = Vec::new();
    for &j in js {
        let aug = Augmenter::new(g, f, j)?;
        let (mut ok, mut max_moves, mut sum_moves, mut max_len) = (0usize, 0usize, 0usize, 0usize);
        let mut exhausted = Vec::new();
        for trial in 0..t.trials {
            let s = trial_seed(t.seed, j, trial);
            let xi = random_nonzero(f, aug.dim(), &mut ChaCha8Rng::seed_from_u64(s));
            let out = nonvanishing_search(&aug, &xi, budget, s)?;
            if out.success {
                ok += 1;
                max_moves = max_moves.max(out.moves_used);
                sum_moves += out.moves_used;
                max_len = max_len.max(out.word_length);
            } else {
                exhausted.push(trial);
            }
        }
        let summary = json!({
            "J": j.to_string(),
            "dim": aug.dim(),
            "trials": t.trials,
            "successes": ok,
            "max_moves": max_moves,
            "total_moves": sum_moves,
            "max_word_length": max_len,
            "exhausted_trials": exhausted,
        });
        let verdict = if exhausted.is_empty() { Verdict::Pass } else { Verdict::Inconclusive };
        checks.push(Check::new(format!("nonvanishing.J={j}"), verdict, &summary));
        per_j.push(summary);
    }
    Ok(Outcome { checks, result: json!({ "coeff": f.label(), "budget": budget, "per_J": per_j }) })
}

pub fn augment_search(g: &Chevalley, coeff: &CoeffSpec, js: &[NodeSet], t: &TrialArgs, budget: usize) -> Result<Outcome> {
    match coeff {
        CoeffSpec::Prime(f) => augment_in(g, f, js, t, budget),
        CoeffSpec::Rational => augment_in(g, &Rationals, js, t, budget),
    }
}

// ---- charp ----

pub fn charp_pipeline(g: &Chevalley, f: &PrimeField, js: &[NodeSet], t: &TrialArgs, depth: usize) -> Result<Outcome> {
    require_equal_characteristic(f, g.field())?;
    let mut checks = Vec::new();
    let mut per_j = Vec::new();
    for &j in js {
        let aug = Augmenter::new(g, f, j)?;
        let (mut completed, mut certs_bad, mut sum_bad, mut reached_bad, mut in_sub) = (0usize, 0usize, 0usize, 0usize, 0usize);
        let mut stalls: BTreeMap<String, usize> = BTreeMap::new();
        let mut first_stall = None;
        let mut final_sums = BTreeMap::new();
        for trial in 0..t.trials {
            let s = trial_seed(t.seed, j, trial);
            let xi = random_nonzero(f, aug.dim(), &mut ChaCha8Rng::seed_from_u64(s));
            let rep = pipeline(&aug, &xi, depth)?;
            if !rep.certificates_verified {
                certs_bad += 1;
            }
            if rep.c_j_in_submodule {
                in_sub += 1;
            }
            if rep.completed {
                completed += 1;
                if rep.final_sum.as_deref() != Some(rep.final_sum_expected.as_str()) {
                    sum_bad += 1;
                }
                if !rep.c_j_in_submodule {
                    reached_bad += 1;
                }
                if let Some(sum) = &rep.final_sum {
                    *final_sums.entry(sum.clone()).or_insert(0usize) += 1;
                }
            }
            if let Some(stall) = &rep.stall {
                *stalls.entry(stall.step.clone()).or_insert(0) += 1;
                first_stall.get_or_insert_with(|| json!({ "trial": trial, "stall": stall }));
            }
        }
        let expected = aug_expected_sign(&aug, f);
        checks.push(Check::pass_if(format!("certificates.J={j}"), certs_bad == 0, json!({ "failed": certs_bad })));
        checks.push(Check::pass_if(
            format!("final_sum.J={j}"),
            sum_bad == 0,
            json!({ "expected": expected, "observed": final_sums, "mismatches": sum_bad }),
        ));
        checks.push(Check::pass_if(format!("c_j_reached.J={j}"), reached_bad == 0, json!({ "completed_without_c_j": reached_bad })));
        let summary = json!({
            "J": j.to_string(),
            "dim": aug.dim(),
            "trials": t.trials,
            "completed": completed,
            "c_j_in_submodule": in_sub,
            "stalls": stalls,
            "first_stall": first_stall,
        });
        checks.push(Check::new(format!("completion.J={j}"), Verdict::Info, &summary));
        per_j.push(summary);
    }
    Ok(Outcome { checks, result: json!({ "coeff": f.label(), "depth": depth, "per_J": per_j }) })
}

fn aug_expected_sign(aug: &Augmenter<PrimeField>, f: &PrimeField) -> String {
    let rs = aug.group().root_system();
    let len = rs.parabolic_data(aug.j()).map(|pd| rs.length(pd.w_j)).unwrap_or(0);
    f.render(&f.from_i64(if len % 2 == 0 { 1 } else { -1 }))
}

// ---- modengine ----

pub fn build_module(g: Chevalley, f: PrimeField, j: Option<NodeSet>, cap: usize) -> Result<MatrixModule> {
    let label = format!("{}(F{})", g.root_system().label(), g.field().q());
    let space = FlagSpace::new(g, cap)?;
    match j {
        None => {
            let mut m = MatrixModule::permutation_module(&space, f)?;
            m = MatrixModule::new(f, m.generators().to_vec(), format!("{}[{label}/B]", f.label()))?;
            Ok(m)
        }
        Some(j) => {
            let p = ej_presentation(&space, &f, j, EjMode::Quotient, cap)?;
            MatrixModule::from_presentation(f, &p, format!("E_J J={j} of {}[{label}/B]", f.label()))
        }
    }
}

pub fn load_module(path: &Path) -> Result<MatrixModule> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: ModuleFile = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    MatrixModule::from_file(&file)
}

pub fn modengine_factors(m: &MatrixModule, seed: u64, oracle_cap: usize) -> Result<Outcome> {
    let (rep, leaves) = composition_factors(m, seed)?;
    let mut checks = vec![Check::new(
        "complete",
        if rep.complete { Verdict::Pass } else { Verdict::Inconclusive },
        json!({ "factors": rep.factors.len() }),
    )];
    let (mut confirmed, mut refuted, mut skipped) = (0, 0, 0);
    for leaf in &leaves {
        match brute_force_irreducible(leaf, oracle_cap) {
            Some(true) => confirmed += 1,
            Some(false) => refuted += 1,
            None => skipped += 1,
        }
    }
    checks.push(Check::new(
        "brute_force_oracle",
        if refuted > 0 { Verdict::Fail } else { Verdict::Pass },
        json!({ "confirmed": confirmed, "refuted": refuted, "skipped_over_cap": skipped }),
    ));
    let dim_sum: usize = rep.dims.iter().sum();
    checks.push(Check::pass_if("dimension_sum", dim_sum == m.dim(), json!({ "sum": dim_sum, "dim": m.dim() })));
    Ok(Outcome { checks, result: serde_json::to_value(&rep).expect("report serializes") })
}

/// Writes the module file; without an explicit path the name is derived from
/// the config hash inside the cache directory.
pub fn export_module(m: &MatrixModule, output: Option<&Path>, config_hash: &str) -> Result<Outcome> {
    let path: PathBuf = match (output, cache_dir()) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(dir)) => dir.join(format!("module-{}.json", &config_hash[..16])),
        (None, None) => {
            return Err(Error::Config(format!("no --output given and {} is unset", crate::report::CACHE_ENV)));
        }
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Config(format!("cannot create {}: {e}", parent.display())))?;
    }
    let text = serde_json::to_string(&m.to_file()).expect("module serializes");
    std::fs::write(&path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    let back = load_module(&path)?;
    let checks = vec![Check::pass_if("round_trip", back.digest() == m.digest(), m.dim())];
    Ok(Outcome {
        checks,
        result: json!({ "path": path.display().to_string(), "dim": m.dim(), "provenance": m.provenance(), "digest": m.digest() }),
    })
}
