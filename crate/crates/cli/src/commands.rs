use serde::Serialize;
use serde_json::{json, Value};

use rotlab_core::abelian::{seeded_rng, DEFAULT_DEPTH};
use rotlab_core::conjugation::{bmv_detector, build_semiconjugacy, find_periodic_orbit};
use rotlab_core::entropy::{entropy_vs_rotation_scan, estimate_entropy, EntropyParams};
use rotlab_core::maps::{iterate, Delta, LiftMap};
use rotlab_core::rational;
use rotlab_core::rotation::{
    rotation_element_solenoid, rotation_interval, rotation_number_circle, rotation_set_torus,
    rotation_vector_torus, OSCILLATION_WARNING,
};
use rotlab_core::suspension::{check_suite, telescoping_residual, SuspensionChar, SuspensionPoint};
use rotlab_core::translation::{
    birkhoff_average, character_ergodicity_test, equidistribution_report, fourier_coefficient,
    halmos_automorphism_test, monothetic_test, Observable, Partition, Quadrature,
};
use rotlab_core::{
    Character, CircleLiftMap, CirclePoint, GroupKind, GroupPoint, MapModel, Translation, Vec2,
};

use crate::args::{Command, Common, GroupArg, TestArg};
use crate::output::{csv_table, CliError, CliResult, Output};
use crate::parse::{self, circle_point, load_map, scalar, torus_point};
use crate::schemas;

/// Residual above which the suspension identities are flagged.
pub const SUSPENSION_TOL: f64 = 1e-9;
/// Telescoping defect above which the time-1 cocycle sum is flagged.
pub const TELESCOPING_TOL: f64 = 1e-6;

fn to_json<T: Serialize>(t: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(t)?)
}

fn unsupported(command: &str, model: &MapModel) -> CliError {
    CliError::Usage(format!("{command} does not support {} maps", model.name()))
}

pub fn run(command: &Command, c: &Common) -> CliResult<Output> {
    match command {
        Command::Rotnum { start } => rotnum(c, start),
        Command::Rotset { grid } => rotset(c, *grid),
        Command::Solrot {
            levels,
            start,
            fiber,
        } => solrot(c, levels, start, *fiber),
        Command::TranslateDiagnose { .. } => translate(c, command),
        Command::Semiconj {
            m,
            rho,
            start,
            periodic,
            tol,
        } => semiconj(c, *m, *rho, *start, periodic.as_deref(), *tol),
        Command::Bmv { tau, starts } => bmv(c, tau.as_deref(), *starts),
        Command::SuspensionCheck { samples, t_max } => suspension(c, *samples, *t_max),
        Command::Entropy {
            eps,
            n_values,
            grid,
        } => entropy(c, eps, n_values, *grid),
        Command::EntropyScan {
            c_values,
            a_values,
            eps,
            n_values,
            grid,
        } => entropy_scan(c, c_values, a_values, eps, n_values, *grid),
        Command::Orbit { start } => orbit(c, start),
        Command::Schema { command } => schema(command),
    }
}

fn rotnum(c: &Common, start: &str) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(1_000_000);
    let report = match spec.build()? {
        MapModel::Circle(f) => rotation_number_circle(&f, &circle_point(start)?, n)?,
        MapModel::Torus(f) => rotation_vector_torus(&f, &torus_point(start)?, n)?,
        MapModel::Solenoid(f) => {
            let p = parse::solenoid_point(start, 0, f.depth())?;
            rotation_element_solenoid(&f, &p, n, &[])?
        }
        m => return Err(unsupported("rotnum", &m)),
    };
    Ok(Output {
        csv: report.windows_csv(),
        warnings: report.warnings.clone(),
        report: to_json(&report)?,
        params: json!({ "map": spec, "n": n, "start": start }),
    })
}

fn rotset(c: &Common, grid: usize) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(100_000);
    let (report, csv) = match spec.build()? {
        MapModel::Torus(f) => {
            let r = rotation_set_torus(&f, grid, n)?;
            let rows = r.hull.iter().flat_map(|h| h.vertices.iter().map(|v| v.to_vec()));
            let csv = csv_table(&["x", "y"], rows)?;
            (r, csv)
        }
        MapModel::Circle(f) => {
            let starts: Vec<CirclePoint> = (0..grid.max(1))
                .map(|i| CirclePoint::new(i as f64 / grid.max(1) as f64))
                .collect();
            let r = rotation_interval(&f, &starts, n)?;
            let csv = csv_table(&["lo", "hi"], r.interval.iter().map(|i| i.to_vec()))?;
            (r, csv)
        }
        m => return Err(unsupported("rotset", &m)),
    };
    let mut warnings = Vec::new();
    if report.oscillation > OSCILLATION_WARNING {
        warnings.push(format!(
            "tail oscillation {:.3e} exceeds {OSCILLATION_WARNING:e}",
            report.oscillation
        ));
    }
    if !report.nested {
        warnings.push("the fine set is not inside the inflated coarse set".into());
    }
    Ok(Output {
        report: to_json(&report)?,
        csv,
        warnings,
        params: json!({ "map": spec, "n": n, "grid": grid }),
    })
}

fn solrot(c: &Common, levels: &[u64], start: &str, fiber: i64) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(100_000);
    let f = match spec.build()? {
        MapModel::Solenoid(f) => f,
        m => return Err(unsupported("solrot", &m)),
    };
    let p = parse::solenoid_point(start, fiber, f.depth())?;
    let report = rotation_element_solenoid(&f, &p, n, levels)?;
    let sol = report.solenoid.as_ref().expect("solenoid section");
    let mut warnings = report.warnings.clone();
    if !sol.coherent {
        warnings.push(format!(
            "per-level rotation numbers disagree by {:.3e} (tolerance {:.3e})",
            sol.coherence_defect, sol.coherence_tolerance
        ));
    }
    let csv = csv_table(
        &["level", "induced_level", "estimate", "residue", "oscillation", "error_bound", "leaf_defect"],
        sol.levels.iter().map(|l| {
            vec![
                l.level.to_string(),
                l.induced_level.to_string(),
                l.estimate.to_string(),
                l.residue.to_string(),
                l.oscillation.to_string(),
                l.error_bound.to_string(),
                l.leaf_defect.to_string(),
            ]
        }),
    )?;
    Ok(Output {
        report: to_json(&report)?,
        csv,
        warnings,
        params: json!({
            "map": spec,
            "n": n,
            "levels": levels,
            "start": start,
            "fiber": fiber,
        }),
    })
}

fn group_kind(group: GroupArg, depth: u32) -> GroupKind {
    match group {
        GroupArg::Circle => GroupKind::Circle,
        GroupArg::Torus => GroupKind::Torus,
        GroupArg::Profinite => GroupKind::Profinite { depth },
        GroupArg::Solenoid => GroupKind::Solenoid { depth },
    }
}

fn default_character(kind: &GroupKind) -> Character {
    let half = num_rational::Ratio::new(1, 2);
    match kind {
        GroupKind::Circle => Character::Circle { k: 1 },
        GroupKind::Torus => Character::Torus { k: [1, 0] },
        GroupKind::Profinite { .. } => Character::profinite(half),
        GroupKind::Solenoid { .. } => Character::solenoid(half),
    }
}

fn diagnostic_csv(report: &Value) -> CliResult<String> {
    let mut rows = vec![
        vec!["verdict".to_string(), report["verdict"].as_str().unwrap_or("").to_string()],
        vec!["scope".to_string(), report["scope"].as_str().unwrap_or("").to_string()],
        vec![
            "witnesses".to_string(),
            report["witnesses"].as_array().map_or(0, |w| w.len()).to_string(),
        ],
    ];
    if let Some(stats) = report["stats"].as_object() {
        for (k, v) in stats {
            if !v.is_array() && !v.is_object() {
                rows.push(vec![k.clone(), v.to_string().trim_matches('"').to_string()]);
            }
        }
    }
    csv_table(&["key", "value"], rows)
}

fn translate(c: &Common, command: &Command) -> CliResult<Output> {
    let Command::TranslateDiagnose {
        group,
        alpha,
        test,
        bins,
        level,
        observable,
        character,
        multiplier,
        samples,
    } = command
    else {
        unreachable!()
    };
    let depth = c.depth.unwrap_or(DEFAULT_DEPTH);
    let mut params = json!({ "test": test, "cap": c.cap });
    if *test == TestArg::Halmos {
        let m = multiplier
            .as_deref()
            .ok_or_else(|| CliError::Usage("the halmos test needs --multiplier".into()))?;
        let q = rational::parse_rational(m)?;
        params["multiplier"] = json!(rational::format_rational(&q));
        let r = halmos_automorphism_test(q, c.cap)?;
        let report = to_json(&r)?;
        return Ok(Output {
            csv: diagnostic_csv(&report)?,
            report,
            warnings: Vec::new(),
            params,
        });
    }
    let group = group.ok_or_else(|| CliError::Usage("this test needs --group".into()))?;
    let kind = group_kind(group, depth);
    params["group"] = json!(group);
    params["depth"] = json!(depth);
    let alpha_point = |s: Option<&String>| -> CliResult<GroupPoint> {
        let s = s.ok_or_else(|| CliError::Usage("this test needs --alpha".into()))?;
        parse::group_point(group, s, Some(depth))
    };
    let parse_observable = || -> CliResult<Observable> {
        match observable {
            Some(s) => Ok(serde_json::from_str(s)?),
            None => Ok(Observable::Character {
                character: default_character(&kind),
            }),
        }
    };
    let (csv, report) = match test {
        TestArg::Monothetic | TestArg::Character => {
            let a = alpha_point(alpha.as_ref())?;
            params["alpha"] = json!(alpha);
            let r = if *test == TestArg::Monothetic {
                monothetic_test(&a, c.cap)
            } else {
                character_ergodicity_test(&a, c.cap)
            };
            let v = to_json(&r)?;
            (diagnostic_csv(&v)?, v)
        }
        TestArg::Equidistribution => {
            let a = alpha_point(alpha.as_ref())?;
            let n = c.n.unwrap_or(100_000);
            let partition = match group {
                GroupArg::Circle => Partition::Dyadic { bins: *bins },
                _ => Partition::Residues { level: *level },
            };
            params["alpha"] = json!(alpha);
            params["n"] = json!(n);
            params["partition"] = json!(partition);
            let r = equidistribution_report(&Translation::new(a), partition, n)?;
            let v = to_json(&r)?;
            (diagnostic_csv(&v)?, v)
        }
        TestArg::Birkhoff => {
            let a = alpha_point(alpha.as_ref())?;
            let n = c.n.unwrap_or(100_000);
            let obs = parse_observable()?;
            params["alpha"] = json!(alpha);
            params["n"] = json!(n);
            params["observable"] = to_json(&obs)?;
            let start = GroupPoint::identity(&kind)?;
            let r = birkhoff_average(&Translation::new(a), &obs, &start, n)?;
            let csv = csv_table(
                &["n", "re", "im"],
                r.windows
                    .iter()
                    .map(|w| vec![w.n.to_string(), w.re.to_string(), w.im.to_string()]),
            )?;
            (csv, to_json(&r)?)
        }
        TestArg::Fourier => {
            let obs = parse_observable()?;
            let chi: Character = match character {
                Some(s) => serde_json::from_str(s)?,
                None => default_character(&kind),
            };
            let quad = Quadrature::MonteCarlo {
                samples: *samples,
                seed: c.seed,
            };
            params["observable"] = to_json(&obs)?;
            params["character"] = to_json(&chi)?;
            params["quadrature"] = to_json(&quad)?;
            let r = fourier_coefficient(&obs, &chi, &kind, quad)?;
            let csv = csv_table(
                &["re", "im", "abs", "standard_error"],
                [vec![
                    r.re.to_string(),
                    r.im.to_string(),
                    r.abs.to_string(),
                    r.standard_error.map_or(String::new(), |s| s.to_string()),
                ]],
            )?;
            (csv, to_json(&r)?)
        }
        TestArg::Halmos => unreachable!(),
    };
    Ok(Output {
        report,
        csv,
        warnings: Vec::new(),
        params,
    })
}

fn semiconj(
    c: &Common,
    m: usize,
    rho: Option<f64>,
    start: f64,
    periodic: Option<&str>,
    tol: f64,
) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(1_000_000);
    let f: CircleLiftMap = match spec.build()? {
        MapModel::Circle(f) => f,
        other => return Err(unsupported("semiconj", &other)),
    };
    let (rho, source) = match rho {
        Some(r) => (r, "given"),
        None => {
            let r = rotation_number_circle(&f, &CirclePoint::new(start), n)?;
            (r.estimate.scalar().unwrap_or(f64::NAN), "estimated")
        }
    };
    let table = build_semiconjugacy(&f, rho, start, n, m)?;
    let mut report = to_json(&table)?;
    report["rho_source"] = json!(source);
    let mut params = json!({
        "map": spec,
        "n": n,
        "m": m,
        "start": start,
        "rho": rho,
        "tol": tol,
    });
    if let Some(pq) = periodic {
        let q = rational::parse_rational(pq)?;
        let period = u32::try_from(*q.denom())
            .map_err(|_| CliError::Usage(format!("period of {pq} is too large")))?;
        let r = find_periodic_orbit(&f, *q.numer(), period, tol)?;
        report["periodic_orbit"] = to_json(&r)?;
        params["periodic"] = json!(pq);
    }
    Ok(Output {
        csv: table.to_csv(),
        report,
        warnings: Vec::new(),
        params,
    })
}

fn mean_displacement<L: LiftMap>(map: &L, start: &L::Point, n: usize) -> L::Delta {
    let mut z = start.clone();
    let mut mean = L::Delta::default();
    for k in 1..=n {
        let (q, d) = map.step(&z);
        mean = mean + (d - mean).scale(1.0 / k as f64);
        z = q;
    }
    mean
}

fn bmv_run<L: LiftMap>(
    map: &L,
    tau: Option<L::Delta>,
    n: usize,
    count: usize,
    seed: u64,
) -> CliResult<(Value, String, Vec<f64>)> {
    let mut rng = seeded_rng(seed);
    let starts: Vec<L::Point> = (0..count.max(1)).map(|_| map.haar_point(&mut rng)).collect();
    let tau = tau.unwrap_or_else(|| mean_displacement(map, &starts[0], n));
    let r = bmv_detector(map, tau, n, &starts)?;
    let csv = csv_table(
        &["n", "c"],
        r.profile.iter().map(|p| vec![p.n.to_string(), p.c.to_string()]),
    )?;
    Ok((to_json(&r)?, csv, tau.components()))
}

fn bmv(c: &Common, tau: Option<&str>, starts: usize) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(100_000);
    let scalar_tau = |s: &str| scalar(s).map(|v| v.0);
    let (report, csv, tau_used) = match spec.build()? {
        MapModel::Circle(f) => bmv_run(&f, tau.map(scalar_tau).transpose()?, n, starts, c.seed)?,
        MapModel::Torus(f) => {
            let t: Option<Vec2> = tau.map(parse::vec2).transpose()?;
            bmv_run(&f, t, n, starts, c.seed)?
        }
        MapModel::Solenoid(f) => bmv_run(&f, tau.map(scalar_tau).transpose()?, n, starts, c.seed)?,
        m => return Err(unsupported("bmv", &m)),
    };
    Ok(Output {
        report,
        csv,
        warnings: Vec::new(),
        params: json!({
            "map": spec,
            "n": n,
            "starts": starts,
            "tau": tau_used,
            "tau_source": if tau.is_some() { "given" } else { "estimated" },
        }),
    })
}

fn suspension_run<L>(
    map: &L,
    chars: &[SuspensionChar],
    samples: usize,
    t_max: f64,
    n: usize,
    seed: u64,
) -> CliResult<(Value, Vec<String>)>
where
    L: LiftMap,
    L::Point: Into<GroupPoint>,
{
    let check = check_suite(map, chars, samples, t_max, seed)?;
    let mut rng = seeded_rng(seed.wrapping_add(1));
    let p = SuspensionPoint::new(map.haar_point(&mut rng), 0.0)?;
    let mut telescoping = Vec::new();
    let mut tele_max: f64 = 0.0;
    for chi in chars {
        let r = telescoping_residual(map, chi, &p, n)?;
        tele_max = tele_max.max(r);
        telescoping.push(json!({ "character": chi, "residual": r }));
    }
    let mut warnings = Vec::new();
    if check.max_residual() > SUSPENSION_TOL {
        warnings.push(format!(
            "identity residual {:.3e} exceeds {SUSPENSION_TOL:e}",
            check.max_residual()
        ));
    }
    if tele_max > TELESCOPING_TOL {
        warnings.push(format!(
            "telescoping residual {tele_max:.3e} exceeds {TELESCOPING_TOL:e}"
        ));
    }
    Ok((
        json!({
            "check": check,
            "max_residual": check.max_residual(),
            "characters": chars,
            "telescoping": telescoping,
            "telescoping_max": tele_max,
        }),
        warnings,
    ))
}

fn suspension(c: &Common, samples: usize, t_max: f64) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(10_000);
    let sc = |ch: Character, k: i64| SuspensionChar::new(ch, k);
    let q = |a, b| num_rational::Ratio::new(a, b);
    let (report, warnings) = match spec.build()? {
        MapModel::Circle(f) => {
            let chars: Vec<_> = (1..=3).map(|k| sc(Character::Circle { k }, k - 1)).collect();
            suspension_run(&f, &chars, samples, t_max, n, c.seed)?
        }
        MapModel::Torus(f) => {
            let chars = [
                sc(Character::Torus { k: [1, 0] }, 0),
                sc(Character::Torus { k: [0, 1] }, 1),
                sc(Character::Torus { k: [1, 1] }, 2),
            ];
            suspension_run(&f, &chars, samples, t_max, n, c.seed)?
        }
        MapModel::Solenoid(f) => {
            let chars = [
                sc(Character::solenoid(q(1, 2)), 0),
                sc(Character::solenoid(q(1, 3)), 1),
                sc(Character::solenoid(q(2, 1)), 2),
            ];
            suspension_run(&f, &chars, samples, t_max, n, c.seed)?
        }
        m => return Err(unsupported("suspension-check", &m)),
    };
    let csv = csv_table(
        &["metric", "value"],
        [
            ("flow_residual", &report["check"]["flow_residual"]),
            ("cocycle_residual", &report["check"]["cocycle_residual"]),
            ("relation_residual", &report["check"]["relation_residual"]),
            ("telescoping_max", &report["telescoping_max"]),
        ]
        .into_iter()
        .map(|(k, v)| vec![k.to_string(), v.to_string()]),
    )?;
    Ok(Output {
        report,
        csv,
        warnings,
        params: json!({ "map": spec, "n": n, "samples": samples, "t_max": t_max }),
    })
}

fn entropy_params(
    model: &MapModel,
    c: &Common,
    eps: &[String],
    n_values: &[usize],
    grid: Option<usize>,
) -> CliResult<EntropyParams> {
    let mut p = EntropyParams::default_for(model);
    if !eps.is_empty() {
        p.eps = eps.iter().map(|e| scalar(e).map(|v| v.0)).collect::<CliResult<_>>()?;
    }
    if !n_values.is_empty() {
        p.n_values = n_values.to_vec();
    } else if let Some(n) = c.n {
        p.n_values = if matches!(model, MapModel::Doubling) || n < 8 {
            (1..=n).collect()
        } else {
            (1..=n / 4).map(|k| 4 * k).collect()
        };
    }
    if let Some(g) = grid {
        p.grid = g;
    }
    p.seed = c.seed;
    Ok(p)
}

fn entropy(c: &Common, eps: &[String], n_values: &[usize], grid: Option<usize>) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let model = spec.build()?;
    let params = entropy_params(&model, c, eps, n_values, grid)?;
    let r = estimate_entropy(&model, &params)?;
    let mut rows = Vec::new();
    for (i, e) in params.eps.iter().enumerate() {
        for (j, n) in params.n_values.iter().enumerate() {
            rows.push(vec![
                e.to_string(),
                n.to_string(),
                r.raw_counts[i][j].to_string(),
                r.counts[i][j].to_string(),
            ]);
        }
    }
    Ok(Output {
        csv: csv_table(&["eps", "n", "raw_count", "count"], rows)?,
        report: to_json(&r)?,
        warnings: Vec::new(),
        params: json!({ "map": spec, "entropy": params }),
    })
}

fn entropy_scan(
    c: &Common,
    cs: &[f64],
    amps: &[f64],
    eps: &[String],
    n_values: &[usize],
    grid: Option<usize>,
) -> CliResult<Output> {
    let n = 100_000;
    let base = MapModel::Circle(CircleLiftMap::rigid(0.0));
    // --n is the rotation orbit length here, not an entropy orbit length
    let c_no_n = Common { n: None, ..c.clone() };
    let params = entropy_params(&base, &c_no_n, eps, n_values, grid)?;
    let rotation_n = c.n.unwrap_or(n);
    let rows = entropy_vs_rotation_scan(cs, amps, rotation_n, &params)?;
    let csv = csv_table(
        &["c", "a", "rotation", "entropy"],
        rows.iter().map(|r| vec![r.c, r.a, r.rotation, r.entropy]),
    )?;
    Ok(Output {
        report: json!({ "rows": rows }),
        csv,
        warnings: Vec::new(),
        params: json!({
            "n": rotation_n,
            "c_values": cs,
            "a_values": amps,
            "entropy": params,
        }),
    })
}

fn orbit(c: &Common, start: &str) -> CliResult<Output> {
    let spec = load_map(c.map.as_deref(), c.depth)?;
    let n = c.n.unwrap_or(100);
    let (report, csv) = match spec.build()? {
        MapModel::Circle(f) => {
            let t = iterate(&f, &circle_point(start)?, n);
            (to_json(&t)?, t.to_csv(&f))
        }
        MapModel::Torus(f) => {
            let t = iterate(&f, &torus_point(start)?, n);
            (to_json(&t)?, t.to_csv(&f))
        }
        MapModel::Solenoid(f) => {
            let t = iterate(&f, &parse::solenoid_point(start, 0, f.depth())?, n);
            (to_json(&t)?, t.to_csv(&f))
        }
        m => return Err(unsupported("orbit", &m)),
    };
    Ok(Output {
        report,
        csv,
        warnings: Vec::new(),
        params: json!({ "map": spec, "n": n, "start": start }),
    })
}

fn schema(command: &str) -> CliResult<Output> {
    let text = schemas::schema_for(command)
        .ok_or_else(|| CliError::Usage(format!("no schema for {command:?}")))?;
    Ok(Output {
        report: serde_json::from_str(text)?,
        csv: String::new(),
        warnings: Vec::new(),
        params: Value::Null,
    })
}
