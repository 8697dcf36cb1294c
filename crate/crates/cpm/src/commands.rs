//! Subcommand implementations; each echoes its header, then writes its data.

use std::env;

use cpm_core::asymptotics::{rate_function, refined_prediction};
use cpm_core::auxdist::{build_aux, local_limit_check};
use cpm_core::graphsim::{theorem41_threshold, GraphSimConfig, WeightSampler};
use cpm_core::moments::{
    bell_number, bell_polynomial, even_partition_number, finite_n_moment, identity_suite, log_moment,
    log_moment_sequence, recurrence_table, MomentValue,
};
use cpm_core::{Number, WeightModel};
use rayon::prelude::*;

use crate::cli::*;
use crate::error::{CliError, Context};
use crate::fmt;
use crate::header::*;
use crate::sim::deviation_experiment_parallel;
use crate::table::{emit, Table};
use crate::weights_arg::parse_weights;

fn out_string(p: &Option<std::path::PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn parse_number(s: &str, flag: &str) -> Result<Number, CliError> {
    Number::parse(s).map_err(|_| CliError::usage(format!("{flag}: `{s}` is not a number")))
}

/// Writes a status line to stderr.
pub fn meta(line: &str) {
    eprintln!("{line}");
}

pub fn moments(a: &MomentsArgs) -> Result<(), CliError> {
    let model = parse_weights(&a.weights)?;
    let x = parse_number(&a.x, "--x")?;
    let mode = if a.exact {
        "exact"
    } else if a.log {
        "log"
    } else if a.finite_n.is_some() {
        "finite_n"
    } else {
        "auto"
    };
    meta(
        &Header::new(CommandConfig::Moments(MomentsConfig {
            weights: a.weights.clone(),
            k: a.k,
            x: a.x.clone(),
            mode: mode.into(),
            finite_n: a.finite_n,
            out: out_string(&a.output.out),
            format: a.output.format,
        }))
        .to_line(),
    );
    let ctx = || format!("--weights {} --k {} --x {}", a.weights, a.k, a.x);
    let mut table = Table::new(&["k", "x", "method", "value", "log_value", "ratio"]);
    let x_cell = fmt::number(&x);
    let mut push = |v: &MomentValue| {
        table.push(vec![
            v.k.to_string(),
            x_cell.clone(),
            v.method.as_str().to_string(),
            fmt::number(&v.value()),
            v.log_value.map(fmt::real).unwrap_or_default(),
            v.exact.as_ref().map(|r| r.to_string()).unwrap_or_default(),
        ]);
    };
    match mode {
        "log" => {
            let xf = x.to_f64();
            let logs = log_moment_sequence(&model, a.k, xf).context(ctx)?;
            for (k, lv) in logs.into_iter().enumerate() {
                table.push(vec![
                    k.to_string(),
                    x_cell.clone(),
                    "recurrence".to_string(),
                    fmt::real(lv.exp()),
                    fmt::real(lv),
                    String::new(),
                ]);
            }
        }
        "finite_n" => {
            let n = a.finite_n.expect("mode implies flag");
            for k in 0..=a.k {
                push(&finite_n_moment(&model, k, n, &x).context(ctx)?);
            }
        }
        _ => {
            if mode == "exact" && !(x.is_exact() && model.is_exact()) {
                return Err(CliError::usage(
                    "--exact needs an exact intensity and exact model parameters",
                ));
            }
            for v in recurrence_table(&model, a.k, &x).context(ctx)? {
                push(&v);
            }
        }
    }
    emit(&table, a.output.format, a.output.out.as_deref())
}

pub fn rate(a: &RateArgs) -> Result<(), CliError> {
    let model = parse_weights(&a.weights)?;
    meta(
        &Header::new(CommandConfig::Rate(RateConfig {
            weights: a.weights.clone(),
            chi: a.chi,
            out: out_string(&a.output.out),
            format: a.output.format,
        }))
        .to_line(),
    );
    let r = rate_function(&model, a.chi).context(|| format!("--weights {} --chi {}", a.weights, a.chi))?;
    let mut t = Table::new(&["chi", "u", "psi", "prefactor", "residual"]);
    t.push(vec![
        fmt::real(r.chi),
        fmt::real(r.saddle.u),
        fmt::real(r.psi),
        fmt::real(r.prefactor),
        fmt::real(r.saddle.residual),
    ]);
    emit(&t, a.output.format, a.output.out.as_deref())
}

/// Orders on the comparison ladder; odd orders are skipped for even-only models.
pub fn compare_ladder(model: &WeightModel, k_max: usize, k_step: usize) -> Vec<usize> {
    (1..=k_max / k_step)
        .map(|i| i * k_step)
        .filter(|k| !model.parity_even_only() || k % 2 == 0)
        .collect()
}

pub fn compare(a: &CompareArgs) -> Result<(), CliError> {
    if a.k_step == 0 {
        return Err(CliError::usage("--k-step must be positive"));
    }
    let model = parse_weights(&a.weights)?;
    meta(
        &Header::new(CommandConfig::Compare(CompareConfig {
            weights: a.weights.clone(),
            chi: a.chi,
            k_max: a.k_max,
            k_step: a.k_step,
            out: out_string(&a.output.out),
            format: a.output.format,
        }))
        .to_line(),
    );
    let ctx = || format!("--weights {} --chi {}", a.weights, a.chi);
    let psi = rate_function(&model, a.chi).context(ctx)?.psi;
    let ks = compare_ladder(&model, a.k_max, a.k_step);
    let rows: Vec<Vec<String>> = ks
        .par_iter()
        .map(|&k| {
            let x = a.chi * k as f64;
            let exact = log_moment(&model, k, x).context(ctx)?;
            let pred = refined_prediction(&model, k, a.chi).context(ctx)?;
            let gap = ((exact - k as f64 * x.ln()) / k as f64 - psi).abs();
            Ok(vec![k.to_string(), fmt::real(exact), fmt::real(pred), fmt::real(gap)])
        })
        .collect::<Result<_, CliError>>()?;
    let mut t = Table::new(&["k", "log_exact", "log_predicted_eq1_10", "rate_gap"]);
    rows.into_iter().for_each(|r| t.push(r));
    emit(&t, a.output.format, a.output.out.as_deref())
}

pub fn aux(a: &AuxArgs) -> Result<(), CliError> {
    let model = parse_weights(&a.weights)?;
    meta(
        &Header::new(CommandConfig::Aux(AuxConfig {
            weights: a.weights.clone(),
            x: a.x,
            u: a.u,
            mass_tolerance: a.mass_tol,
            llt_chi: a.llt_chi,
            k: a.k,
            out: out_string(&a.output.out),
            format: a.output.format,
        }))
        .to_line(),
    );
    let ctx = || format!("--weights {} --x {} --u {}", a.weights, a.x, a.u);
    let d = build_aux(&model, a.x, a.u, a.mass_tol).context(ctx)?;
    let mut t = Table::new(&["j", "p_j"]);
    for (j, p) in d.support() {
        t.push(vec![j.to_string(), fmt::real(p)]);
    }
    let mut summary = serde_json::json!({
        "mean": d.mean(),
        "variance": d.variance(),
        "sigma": d.sigma(),
        "mass": d.mass(),
        "support_cap": d.support_cap(),
        "log_g": d.log_g(),
    });
    if let (Some(chi), Some(k)) = (a.llt_chi, a.k) {
        let l = local_limit_check(&model, chi, k).context(|| format!("--llt-chi {chi} --k {k}"))?;
        summary["r_k"] = serde_json::json!(l.ratio);
        summary["r_k_raw"] = serde_json::json!(l.raw_ratio);
        summary["k"] = serde_json::json!(k);
    }
    emit(&t, a.output.format, a.output.out.as_deref())?;
    meta(&serde_json::json!({ "summary": summary }).to_string());
    Ok(())
}

/// Seed from the flag, else `CPM_SEED`, else 0, with its source.
pub fn resolve_seed(flag: Option<u64>) -> Result<(u64, &'static str), CliError> {
    if let Some(s) = flag {
        return Ok((s, "flag"));
    }
    match env::var("CPM_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map(|s| (s, "env"))
            .map_err(|_| CliError::usage(format!("CPM_SEED=`{v}` is not an unsigned 64-bit integer"))),
        Err(_) => Ok((0, "default")),
    }
}

pub fn graphsim(a: &GraphsimArgs) -> Result<(), CliError> {
    let model = parse_weights(&a.weights)?;
    let sampler = WeightSampler::for_model(&model).context(|| format!("--weights {}", a.weights))?;
    if a.n < 2 {
        return Err(CliError::usage("--n must be at least 2"));
    }
    let ln_n = (a.n as f64).ln();
    let (rho, kappa) = match (a.kappa, a.rho) {
        (Some(k), _) => (k * ln_n, k),
        (None, Some(r)) => (r, r / ln_n),
        (None, None) => unreachable!("clap requires one of --kappa, --rho"),
    };
    let (seed, seed_source) = resolve_seed(a.seed)?;
    meta(
        &Header::new(CommandConfig::Graphsim(GraphsimConfig {
            n: a.n,
            kappa,
            rho,
            weights: a.weights.clone(),
            s: a.s.clone(),
            relative: a.relative,
            trials: a.trials,
            seed,
            seed_source: seed_source.into(),
            out: out_string(&a.output.out),
            format: a.output.format,
        }))
        .to_line(),
    );
    let ctx = || format!("--n {} --kappa {kappa} --weights {}", a.n, a.weights);
    let s = if a.relative {
        let thr = theorem41_threshold(&model, kappa).context(ctx)?;
        a.s.iter().map(|v| v * thr).collect()
    } else {
        a.s.clone()
    };
    let config = GraphSimConfig {
        n: a.n,
        rho,
        weights: sampler,
        s,
        trials: a.trials,
        seed,
    };
    let r = deviation_experiment_parallel(&config).context(ctx)?;
    let mut t = Table::new(&["n", "kappa", "s", "p_hat", "ci", "bound", "threshold", "vacuous_flag"]);
    for c in &r.cells {
        t.push(vec![
            r.n.to_string(),
            fmt::real(r.kappa),
            fmt::real(c.s),
            fmt::real(c.p_hat),
            fmt::real(c.ci_half_width),
            fmt::real(c.bound.value),
            fmt::real(r.threshold),
            u8::from(c.bound.vacuous).to_string(),
        ]);
    }
    emit(&t, a.output.format, a.output.out.as_deref())
}

pub fn bell(a: &BellArgs) -> Result<(), CliError> {
    let x = parse_number(&a.x, "--x")?;
    meta(&Header::new(CommandConfig::Bell(BellConfig { k: a.k, x: a.x.clone() })).to_line());
    let v = bell_polynomial(a.k, &x).context(|| format!("--k {} --x {}", a.k, a.x))?;
    match &v.exact {
        Some(r) => println!("{r}"),
        None => println!("{}", fmt::real(v.approx)),
    }
    Ok(())
}

/// Identity table rows: closed forms, compositions, modified Bell values.
pub fn identity_table() -> Table {
    let mut t = Table::new(&["name", "case", "passed", "detail"]);
    for c in identity_suite() {
        t.push(vec![c.name, c.case, c.passed.to_string(), c.detail]);
    }
    let listed = [1u32, 1, 4, 25, 262, 3991];
    for (i, want) in listed.iter().enumerate() {
        let got = even_partition_number(2 * i).expect("even order");
        t.push(vec![
            "even_partition_recurrence".into(),
            format!("2k={}", 2 * i),
            (got == (*want).into()).to_string(),
            format!("value={got} listed={want}"),
        ]);
    }
    for k in 0..=10 {
        let e = even_partition_number(2 * k).expect("even order");
        let b = bell_number(2 * k);
        t.push(vec![
            "even_partition_below_bell".into(),
            format!("2k={}", 2 * k),
            (e <= b).to_string(),
            format!("even={e} bell={b}"),
        ]);
    }
    t
}

pub fn identities(a: &IdentitiesArgs) -> Result<(), CliError> {
    meta(
        &Header::new(CommandConfig::Identities(IdentitiesConfig {
            out: out_string(&a.output.out),
            format: a.output.format,
        }))
        .to_line(),
    );
    let t = identity_table();
    emit(&t, a.output.format, a.output.out.as_deref())?;
    let failed = t.rows.iter().filter(|r| r[2] != "true").count();
    if failed > 0 {
        return Err(CliError::Check(format!(
            "{failed} of {} identity checks failed",
            t.rows.len()
        )));
    }
    Ok(())
}
