//! One function per subcommand, each returning its outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use arboreal::catalog::Catalog;
use arboreal::dynamics::{scan, Experiment, Outcome, PrimeRange, ScanMode, ScanReport, DEFAULT_BIT_CAP};
use arboreal::perm::{CycleType, Perm, PermGroup, ENUMERATION_CAP};
use arboreal::ramification::{
    belyi_family_check, invariably_generates, is_polynomial_type, meets_at, rh_genus, shabat_tau,
    triple_primitivity_oracle, OracleMode, RamificationType, RationalPoint, INVARIABLE_CAP,
};
use arboreal::rational::{parse_rational, ratio_string, ratio_to_json};
use arboreal::splitting::{
    invariant_submodules, splitting_certificate, verify_certificate, KernelKind, SplittingCertificate,
};
use arboreal::stats::{
    coset_fpf_table, cycle_count_distribution, few_cycles_bound, fixed_point_distribution, full_cycle_proportion,
    olds_coset_formula, sampled_fixed_points, Mode, COSET_CAP, EXACT_MAX_DEGREE, EXACT_MAX_DEPTH, SHARD_SIZE,
};
use arboreal::wreath::{conjugation_counterexample, largeness_profile, partitions_compatible, WreathTower};

use crate::manifest::{sha256_hex, Output};
use crate::{
    verify, CatalogCmd, Cli, Command, Execution, RamificationCmd, ScanCmd, SplittingCmd, StatsCmd, SystemArgs,
    TowerArgs, WreathCmd,
};

/// Default sample count when a tower falls outside exact mode.
pub const DEFAULT_SAMPLES: u64 = 100_000;

pub fn execute(cli: &Cli) -> Result<Execution> {
    match &cli.command {
        Command::Stats(cmd) => stats(cli, cmd),
        Command::Scan(cmd) => scan_cmd(cli, cmd),
        Command::Ramification(cmd) => ramification(cli, cmd),
        Command::Wreath(cmd) => wreath(cmd),
        Command::Splitting(cmd) => splitting(cmd),
        Command::Verify(args) => verify::run(cli, args),
        Command::Catalog(cmd) => catalog(cmd),
    }
}

fn seed_for(cli: &Cli) -> u64 {
    cli.seed.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64)
    })
}

/// `(group, socle, label)` for `catalog:NAME`, `NAME`, `S<n>` or `A<n>`.
pub fn resolve_group(reference: &str) -> Result<(PermGroup, PermGroup, String)> {
    let name = reference.strip_prefix("catalog:").unwrap_or(reference);
    let catalog = Catalog::from_env()?;
    let (g, s) = catalog.group_and_socle(name)?;
    Ok((g, s, name.to_string()))
}

fn parse_generators(degree: usize, list: &str) -> Result<PermGroup> {
    let gens = list
        .split(';')
        .map(|s| Perm::parse(s.trim(), degree))
        .collect::<arboreal::Result<Vec<_>>>()?;
    Ok(PermGroup::new(degree, gens)?)
}

pub fn parse_range(s: &str) -> Result<PrimeRange> {
    let (from, to) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("prime range must look like FROM..TO, got {s:?}"))?;
    let from: u64 = from.trim().parse().with_context(|| format!("bad range start {from:?}"))?;
    let to: u64 = to.trim().trim_start_matches('=').parse().with_context(|| format!("bad range end {to:?}"))?;
    if from > to {
        bail!("empty prime range {s}");
    }
    Ok(PrimeRange { from, to })
}

fn stats(cli: &Cli, cmd: &StatsCmd) -> Result<Execution> {
    match cmd {
        StatsCmd::CosetFpf { group, socle } => {
            let (g, auto, label) = resolve_group(group)?;
            let (normal, normal_label) = if socle == "auto" {
                (auto, format!("soc({label})"))
            } else {
                let (n, _, l) = resolve_group(socle)?;
                (n, l)
            };
            let table = coset_fpf_table(&g, &normal)?.named(&label, &normal_label);
            let mut exec = Execution::new("stats coset-fpf").cap("coset_cap", COSET_CAP);
            exec.summary.push(format!(
                "{label}: {} cosets, alpha = {} ({})",
                table.rows.len(),
                ratio_string(&table.alpha),
                table.method
            ));
            exec.outputs.push(Output::json("stats-coset-fpf.json", &table));
            exec.outputs.push(Output::text("stats-coset-fpf.csv", table.csv()));
            Ok(exec)
        }
        StatsCmd::Olds { n } => {
            let (even, odd) = olds_coset_formula(*n)?;
            let table = coset_fpf_table(&PermGroup::symmetric(*n), &PermGroup::alternating(*n))?;
            let agrees = table.rows[0].fpf == even && table.rows[1].fpf == odd;
            let mut exec = Execution::new("stats olds");
            exec.summary.push(format!(
                "n = {n}: A_n coset {}, odd coset {}; table {}",
                ratio_string(&even),
                ratio_string(&odd),
                if agrees { "agrees" } else { "DISAGREES" }
            ));
            exec.passed = agrees;
            exec.outputs.push(Output::json(
                "stats-olds.json",
                &json!({
                    "n": n,
                    "alternating_coset": ratio_to_json(&even),
                    "odd_coset": ratio_to_json(&odd),
                    "table": table,
                    "agrees": agrees,
                }),
            ));
            exec.outputs.push(Output::text(
                "stats-olds.csv",
                format!(
                    "coset,formula,table\nalternating,{},{}\nodd,{},{}\n",
                    ratio_string(&even),
                    ratio_string(&table.rows[0].fpf),
                    ratio_string(&odd),
                    ratio_string(&table.rows[1].fpf)
                ),
            ));
            Ok(exec)
        }
        StatsCmd::FixedPoints(args) | StatsCmd::Cycles(args) => {
            let fixed = matches!(cmd, StatsCmd::FixedPoints(_));
            let name = if fixed { "stats fixed-points" } else { "stats cycles" };
            tower_distribution(cli, args, fixed, name)
        }
        StatsCmd::FullCycle(args) => {
            let tower = WreathTower::parse(&args.tower)?;
            let seed = seed_for(cli);
            let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
            let prop = full_cycle_proportion(&tower, samples, seed)?;
            let mut exec = Execution::new("stats full-cycle")
                .cap("exact_max_degree", EXACT_MAX_DEGREE)
                .cap("exact_max_depth", EXACT_MAX_DEPTH);
            if !prop.is_exact() {
                exec.seed = Some(seed);
                exec = exec.cap("shard_size", SHARD_SIZE);
            }
            exec.summary.push(format!(
                "{tower}: full-cycle proportion {} ({})",
                ratio_string(&prop.value),
                if prop.is_exact() { "exact" } else { "sampled" }
            ));
            exec.outputs.push(Output::json(
                "stats-full-cycle.json",
                &json!({"tower": tower.to_string(), "proportion": prop}),
            ));
            exec.outputs.push(Output::text(
                "stats-full-cycle.csv",
                format!("tower,num,den\n{tower},{},{}\n", prop.value.numer(), prop.value.denom()),
            ));
            Ok(exec)
        }
        StatsCmd::Bound { n, g, gamma } => {
            let gamma = parse_rational(gamma)?;
            let b = few_cycles_bound(*n, *g, &gamma)?;
            let mut exec = Execution::new("stats bound");
            exec.passed = b.holds || b.degenerate;
            exec.summary.push(format!(
                "N = {n}, g = {g}, gamma = {}: sum {} {} bound {}",
                ratio_string(&gamma),
                ratio_string(&b.sum),
                if b.holds { "≤" } else { ">" },
                ratio_string(&b.bound)
            ));
            exec.outputs.push(Output::json("stats-bound.json", &b));
            exec.outputs.push(Output::text(
                "stats-bound.csv",
                format!(
                    "n,g,gamma,sum,bound,holds\n{n},{g},{},{},{},{}\n",
                    ratio_string(&gamma),
                    ratio_string(&b.sum),
                    ratio_string(&b.bound),
                    b.holds
                ),
            ));
            Ok(exec)
        }
    }
}

fn tower_distribution(cli: &Cli, args: &TowerArgs, fixed: bool, name: &str) -> Result<Execution> {
    let tower = WreathTower::parse(&args.tower)?;
    let mut exec = Execution::new(name)
        .cap("exact_max_degree", EXACT_MAX_DEGREE)
        .cap("exact_max_depth", EXACT_MAX_DEPTH);
    let dist = match args.samples {
        Some(samples) => {
            let seed = seed_for(cli);
            exec.seed = Some(seed);
            exec = exec.cap("shard_size", SHARD_SIZE);
            if fixed {
                sampled_fixed_points(&tower, samples, seed)?
            } else {
                cycle_count_distribution(&tower, Mode::MonteCarlo { samples, seed })?
            }
        }
        None if fixed => fixed_point_distribution(&tower)
            .with_context(|| format!("{tower} is outside exact mode; pass --samples"))?,
        None => cycle_count_distribution(&tower, Mode::Exact)
            .with_context(|| format!("{tower} is outside exact mode; pass --samples"))?,
    };
    let table: Vec<String> = dist.probs.iter().map(|(k, p)| format!("{k}: {}", ratio_string(p))).collect();
    exec.summary.push(format!("{tower}: {}; mean {}", table.join(", "), ratio_string(&dist.mean())));
    let stem = exec.stem();
    exec.outputs.push(Output::json(
        format!("{stem}.json"),
        &json!({"tower": tower.to_string(), "distribution": dist}),
    ));
    exec.outputs.push(Output::text(format!("{stem}.csv"), dist.csv()));
    Ok(exec)
}

fn experiment(system: &SystemArgs, a0: &str, mode: ScanMode) -> Result<Experiment> {
    let f = system
        .f
        .split(',')
        .map(|c| c.trim().parse().map_err(|_| anyhow!("bad coefficient {c:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Experiment {
        f,
        a: parse_rational(&system.a)?,
        a0: parse_rational(a0)?,
        mode,
        c: None,
        n_max: None,
        primes: parse_range(&system.primes)?,
        seed: None,
    })
}

fn scan_cmd(cli: &Cli, cmd: &ScanCmd) -> Result<Execution> {
    let (exp, chunk) = match cmd {
        ScanCmd::Hits { system, a0 } => (experiment(system, a0, ScanMode::Hits)?, system.chunk),
        ScanCmd::Stability { system, c, nmax } => {
            let mut e = experiment(system, "0", ScanMode::Stability)?;
            e.c = Some(*c);
            e.n_max = Some(*nmax);
            (e, system.chunk)
        }
        ScanCmd::Frobenius { system, n } => {
            let mut e = experiment(system, "0", ScanMode::Frobenius)?;
            e.n_max = Some(*n);
            (e, system.chunk)
        }
        ScanCmd::Run { experiment, chunk } => {
            let text = fs::read_to_string(experiment).with_context(|| format!("reading {}", experiment.display()))?;
            (Experiment::from_json(&text)?, *chunk)
        }
    };
    run_experiment(&cli.out, &exp, chunk)
}

fn mode_name(mode: ScanMode) -> &'static str {
    match mode {
        ScanMode::Hits => "hits",
        ScanMode::Stability => "stability",
        ScanMode::Frobenius => "frobenius",
    }
}

/// Scans `exp` chunk by chunk, reusing checkpoints under
/// `out/checkpoints/<experiment hash>/`.
pub fn run_experiment(out: &Path, exp: &Experiment, chunk: u64) -> Result<Execution> {
    exp.validate()?;
    if chunk == 0 {
        bail!("--chunk must be positive");
    }
    let key = sha256_hex(&serde_json::to_vec(exp)?)[..16].to_string();
    let dir = out.join("checkpoints").join(&key);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut report: Option<ScanReport> = None;
    let mut resumed = 0;
    let mut from = exp.primes.from;
    loop {
        let to = from.saturating_add(chunk - 1).min(exp.primes.to);
        let sub = Experiment {
            primes: PrimeRange { from, to },
            ..exp.clone()
        };
        let path = dir.join(format!("{from}-{to}.json"));
        let cached = fs::read_to_string(&path)
            .ok()
            .and_then(|t| ScanReport::from_json(&t).ok())
            .filter(|r| r.experiment == sub);
        let part = match cached {
            Some(r) => {
                resumed += 1;
                r
            }
            None => {
                let r = scan(&sub)?;
                fs::write(&path, r.to_json()).with_context(|| format!("writing {}", path.display()))?;
                r
            }
        };
        report = Some(match report {
            None => part,
            Some(acc) => acc.merge(&part)?,
        });
        if to == exp.primes.to {
            break;
        }
        from = to + 1;
    }
    let report = report.expect("at least one chunk");
    let name = format!("scan {}", mode_name(exp.mode));
    let mut exec = Execution::new(&name)
        .cap("orbit_bit_cap", DEFAULT_BIT_CAP)
        .cap("chunk", chunk)
        .cap("checkpoint", key);
    let s = &report.summary;
    exec.summary.push(format!(
        "{} primes scanned, {} skipped, {} matching ({})",
        s.scanned, s.skipped, s.matching, s.criterion
    ));
    if let Some(d) = &s.density {
        exec.summary.push(format!("density {} ≈ {}", ratio_string(&d.value), d.decimal));
    }
    if exp.mode == ScanMode::Frobenius {
        let mut patterns: BTreeMap<CycleType, u64> = BTreeMap::new();
        for r in &report.records {
            if let Outcome::Factors { degrees } = &r.outcome {
                *patterns.entry(CycleType::from_parts(degrees.clone())).or_default() += 1;
            }
        }
        for (k, v) in patterns {
            exec.summary.push(format!("  {k}: {v}"));
        }
    }
    if resumed > 0 {
        exec.summary.push(format!("{resumed} chunk(s) resumed from checkpoints"));
    }
    exec.summary.push(report.note.clone());
    let stem = exec.stem();
    exec.outputs.push(Output::text(format!("{stem}.json"), report.to_json() + "\n"));
    exec.outputs.push(Output::text(format!("{stem}.csv"), report.csv()));
    Ok(exec)
}

fn ramification(cli: &Cli, cmd: &RamificationCmd) -> Result<Execution> {
    match cmd {
        RamificationCmd::Genus { ram_type, target_genus } => {
            let ram = RamificationType::parse(ram_type)?;
            let genus = rh_genus(*target_genus, &ram)?;
            let mut exec = Execution::new("ramification genus");
            exec.summary.push(format!("{ram}: genus {genus}"));
            exec.outputs.push(Output::json(
                "ramification-genus.json",
                &json!({
                    "type": ram.to_string(),
                    "degree": ram.degree(),
                    "target_genus": target_genus,
                    "genus": genus,
                    "polynomial_type": is_polynomial_type(&ram),
                }),
            ));
            Ok(exec)
        }
        RamificationCmd::Belyi(p) => {
            let report = belyi_family_check(p.d, p.r, p.s, p.t);
            let mut exec = Execution::new("ramification belyi");
            exec.summary.push(if report.admissible {
                format!("admissible, polynomial type {}", report.polynomial_type)
            } else {
                format!("inadmissible: {}", report.violations.join("; "))
            });
            exec.outputs.push(Output::json("ramification-belyi.json", &report));
            Ok(exec)
        }
        RamificationCmd::Oracle { params: p, samples } => {
            let mut exec = Execution::new("ramification oracle");
            let mode = match samples {
                Some(samples) => {
                    let seed = seed_for(cli);
                    exec.seed = Some(seed);
                    OracleMode::Sampled { samples: *samples, seed }
                }
                None => OracleMode::Exhaustive,
            };
            let verdict = triple_primitivity_oracle(p.d, p.r, p.s, p.t, mode)?;
            exec.passed = verdict.is_all_primitive();
            exec.summary.push(serde_json::to_string(&verdict)?.to_string());
            exec.outputs.push(Output::json(
                "ramification-oracle.json",
                &json!({"d": p.d, "r": p.r, "s": p.s, "t": p.t, "result": verdict}),
            ));
            Ok(exec)
        }
        RamificationCmd::Shabat { sigma, degree } => {
            let sigma = Perm::parse(sigma, *degree)?;
            let tau = shabat_tau(&sigma);
            let product = sigma.compose(&tau)?;
            let ram = RamificationType::new(vec![product.cycle_type(), sigma.cycle_type(), tau.cycle_type()])?;
            let genus = rh_genus(0, &ram).ok();
            let is_cycle = product.cycle_type().parts() == [*degree];
            let mut exec = Execution::new("ramification shabat");
            exec.passed = is_cycle && genus == Some(0);
            exec.summary.push(format!("tau = {tau}; sigma·tau = {product}; type {ram}"));
            exec.outputs.push(Output::json(
                "ramification-shabat.json",
                &json!({
                    "sigma": sigma, "tau": tau, "product": product,
                    "product_is_d_cycle": is_cycle,
                    "type": ram.to_string(),
                    "genus": genus,
                    "polynomial_type": is_polynomial_type(&ram),
                }),
            ));
            Ok(exec)
        }
        RamificationCmd::Meets { a, b, p } => {
            let pa: RationalPoint = a.parse()?;
            let pb: RationalPoint = b.parse()?;
            let m = meets_at(&pa, &pb, *p)?;
            let mut exec = Execution::new("ramification meets");
            exec.summary.push(format!("{pa} and {pb} meet at {p} with multiplicity {m}"));
            exec.outputs.push(Output::json(
                "ramification-meets.json",
                &json!({"a": pa.to_string(), "b": pb.to_string(), "p": p, "multiplicity": m}),
            ));
            Ok(exec)
        }
        RamificationCmd::Invariable {
            group,
            normal,
            subgroups,
        } => {
            let (g, _, label) = resolve_group(group)?;
            let (n, _, normal_label) = resolve_group(normal)?;
            let subs = subgroups
                .iter()
                .map(|s| parse_generators(g.degree(), s))
                .collect::<Result<Vec<_>>>()?;
            let result = invariably_generates(&g, &n, &subs)?;
            let mut exec = Execution::new("ramification invariable").cap("invariable_cap", INVARIABLE_CAP);
            exec.summary.push(format!(
                "subgroups {} invariably generate {normal_label} in {label}",
                if result { "do" } else { "do not" }
            ));
            exec.outputs.push(Output::json(
                "ramification-invariable.json",
                &json!({"group": label, "normal": normal_label, "subgroups": subgroups, "invariably_generates": result}),
            ));
            Ok(exec)
        }
    }
}

fn wreath(cmd: &WreathCmd) -> Result<Execution> {
    match cmd {
        WreathCmd::Order { tower } => {
            let t = WreathTower::parse(tower)?;
            let mut exec = Execution::new("wreath order");
            exec.summary.push(format!("{t}: degree {}, order {}", t.leaf_count()?, t.order()));
            exec.outputs.push(Output::json(
                "wreath-order.json",
                &json!({"tower": t.to_string(), "degree": t.leaf_count()?, "order": t.order().to_string()}),
            ));
            Ok(exec)
        }
        WreathCmd::Profile { tower } => {
            let t = WreathTower::parse(tower)?;
            let g = t.tower_group()?;
            let profile = largeness_profile(&g, &t.block_systems()?, &t.degrees())?;
            let mut exec = Execution::new("wreath profile");
            for l in &profile.levels {
                exec.summary.push(format!(
                    "level {} (degree {}): kernel order {}, large {:?}",
                    l.level, l.degree, l.kernel_order, l.large
                ));
            }
            exec.summary.extend(profile.warnings.iter().cloned());
            exec.outputs.push(Output::json(
                "wreath-profile.json",
                &json!({"tower": t.to_string(), "profile": profile}),
            ));
            Ok(exec)
        }
        WreathCmd::Counterexample { n } => {
            let ex = conjugation_counterexample(*n)?;
            let compatible = partitions_compatible(&ex.slot_group, &ex.p, &ex.p_j)?;
            let mut exec = Execution::new("wreath counterexample");
            exec.passed = !compatible;
            exec.summary.push(format!(
                "n = {n}: |G| = {}, P = {:?}, P_J = {:?}, compatible {compatible}",
                ex.group.order(),
                ex.p.blocks(),
                ex.p_j.blocks()
            ));
            exec.outputs.push(Output::json(
                "wreath-counterexample.json",
                &json!({
                    "n": n,
                    "degree": ex.group.degree(),
                    "order": ex.group.order().to_string(),
                    "slots": ex.slots,
                    "p": ex.p.blocks(),
                    "p_j": ex.p_j.blocks(),
                    "compatible": compatible,
                }),
            ));
            Ok(exec)
        }
    }
}

fn splitting(cmd: &SplittingCmd) -> Result<Execution> {
    match cmd {
        SplittingCmd::Submodules { d } => {
            let mods = invariant_submodules(*d)?;
            let mut exec = Execution::new("splitting submodules");
            for m in &mods {
                exec.summary.push(format!("{}: dimension {}", m.kind.name(), m.dimension()));
            }
            exec.outputs.push(Output::json("splitting-submodules.json", &json!({"d": d, "submodules": mods})));
            Ok(exec)
        }
        SplittingCmd::Check { d, kernel } => {
            let kinds: Vec<KernelKind> = if kernel == "all" {
                KernelKind::ALL.to_vec()
            } else {
                vec![KernelKind::parse(kernel)?]
            };
            let mut exec = Execution::new("splitting check");
            for k in kinds {
                let cert = splitting_certificate(*d, k)?;
                exec.passed &= cert.all_split;
                exec.summary.push(format!(
                    "d = {d}, kernel {}: {} groups, all split {}",
                    k.name(),
                    cert.groups_found,
                    cert.all_split
                ));
                exec.outputs.push(Output::json(format!("splitting-d{d}-{}.json", k.name()), &cert));
            }
            Ok(exec)
        }
        SplittingCmd::Verify { certificate } => {
            let text =
                fs::read_to_string(certificate).with_context(|| format!("reading {}", certificate.display()))?;
            let cert: SplittingCertificate = serde_json::from_str(&text)?;
            let valid = verify_certificate(&cert)?;
            let mut exec = Execution::new("splitting verify");
            exec.passed = valid && cert.all_split;
            exec.summary.push(format!(
                "certificate d = {}, kernel {}: {}",
                cert.d,
                cert.kernel.name(),
                if valid { "re-verified" } else { "INVALID" }
            ));
            exec.outputs.push(Output::json(
                "splitting-verify.json",
                &json!({"d": cert.d, "kernel": cert.kernel, "valid": valid, "allSplit": cert.all_split}),
            ));
            Ok(exec)
        }
    }
}

fn catalog(cmd: &CatalogCmd) -> Result<Execution> {
    let catalog = Catalog::from_env()?;
    let describe = |name: &str| -> Result<serde_json::Value> {
        let e = catalog.get(name)?;
        let g = e.group()?;
        let s = e.socle()?;
        Ok(json!({
            "name": e.name,
            "degree": e.degree,
            "order": g.order().to_string(),
            "socle_order": s.order().to_string(),
            "transitive": g.is_transitive(),
            "primitive": g.is_primitive()?,
            "alpha_applicable": e.alpha_applicable,
            "provenance": e.provenance,
        }))
    };
    match cmd {
        CatalogCmd::List | CatalogCmd::Check => {
            let name = if matches!(cmd, CatalogCmd::List) { "catalog list" } else { "catalog check" };
            let mut exec = Execution::new(name).cap("enumeration_cap", ENUMERATION_CAP);
            let rows = catalog
                .entries()
                .iter()
                .map(|e| describe(&e.name))
                .collect::<Result<Vec<_>>>()?;
            for r in &rows {
                exec.summary.push(format!(
                    "{:<14} degree {:>3}  order {:>10}  socle {:>10}",
                    r["name"].as_str().unwrap_or(""),
                    r["degree"],
                    r["order"].as_str().unwrap_or(""),
                    r["socle_order"].as_str().unwrap_or("")
                ));
            }
            exec.outputs.push(Output::json(format!("{}.json", exec.stem()), &rows));
            Ok(exec)
        }
        CatalogCmd::Show { name } => {
            let mut exec = Execution::new("catalog show");
            let entry = catalog.get(name)?;
            let info = describe(name)?;
            exec.summary.push(serde_json::to_string_pretty(&info)?);
            exec.outputs.push(Output::json("catalog-show.json", &json!({"entry": entry, "computed": info})));
            Ok(exec)
        }
    }
}
