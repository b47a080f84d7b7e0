//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectra_core::chains::{canonical_ip_chain, image_chain_experiment, verify_chain_d, verify_tree_b, CertTree};
use spectra_core::largeness::{harmonic_partial_sum, j_witness_search, longest_ap, FamilyCheck, ShiftDomain};
use spectra_core::preservation::{
    banach_transfer_check, density_transfer_check, gap_transfer_check, hsd_inequality_check, injective_partition,
    DensityCase,
};
use spectra_core::reals::NearestMap;
use spectra_core::sets::{primes_up_to, random_density_set};
use spectra_core::spectra::{in_agreement_zone, spectrum_image};
use spectra_core::{GeneratorSequence, IntegerSet, RealValue, SpectrumParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn random_rational_pair(rng: &mut ChaCha8Rng, max_num: i64) -> (i64, i64, i64, i64) {
    let q = rng.gen_range(1..=1000);
    let p = rng.gen_range(1..=max_num * q).min(1000 * q);
    let s = rng.gen_range(2..=1000);
    let r = rng.gen_range(1..s);
    (p, q, r, s)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_floor_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut checked = 0u64;
    for _ in 0..1000 {
        let (p, q, r, s) = random_rational_pair(&mut rng, 1000);
        let params = SpectrumParams::new(RealValue::rational(p, q).unwrap(), RealValue::rational(r, s).unwrap())
            .map_err(|e| e.to_string())?;
        let den = BigInt::from(q) * s;
        let step = BigInt::from(p) * s;
        let mut num = BigInt::from(r) * q;
        for n in 1..=10_000u64 {
            num += &step;
            let want = num.div_floor(&den);
            let got = params.apply(n).map_err(|e| e.to_string())?;
            ensure(BigInt::from(got) == want, || format!("alpha={p}/{q} gamma={r}/{s} n={n}: {got} vs {want}"))?;
            checked += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:.2?}"))?;
    Ok(format!("{checked} evaluations, 0 mismatches, {t:.2?}"))
}

// signed fractional parts as numerators over the denominator q of alpha = p/q
fn frac_numerators(map: &NearestMap, q: i64, upto: u64) -> Result<Vec<i64>, String> {
    let qq = BigRational::from_integer(q.into());
    (0..=upto)
        .map(|n| {
            if n == 0 {
                return Ok(0);
            }
            let f = map.signed_frac(n, 64).map_err(|e| e.to_string())?;
            let v = f.exact().ok_or("rational alpha gave an inexact fraction")? * &qq;
            Ok(i64::try_from(v.to_integer()).unwrap())
        })
        .collect()
}

fn pointwise_shadows() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // (a) additivity mod 1 over all x, y <= 1000
    let mut pairs = 0u64;
    for _ in 0..5 {
        let q = rng.gen_range(2..=997);
        let p = rng.gen_range(1..=50 * q);
        let map = NearestMap::new(&RealValue::rational(p, q).unwrap()).map_err(|e| e.to_string())?;
        let k = frac_numerators(&map, q, 2000)?;
        // v mod q, represented so that v/q lies in [-1/2, 1/2)
        let reduce = |v: i64| {
            let w = v.rem_euclid(q);
            if 2 * w >= q {
                w - q
            } else {
                w
            }
        };
        for x in 1..=1000usize {
            for y in 1..=1000usize {
                ensure(reduce(k[x] + k[y]) == k[x + y], || format!("alpha={p}/{q} x={x} y={y}"))?;
                pairs += 1;
            }
        }
    }
    // (b) floor equals nearest in the agreement zone; (c) nearest round trip
    let mut zone = 0u64;
    let mut trips = 0u64;
    for _ in 0..50 {
        let (p, q, r, s) = random_rational_pair(&mut rng, 20);
        let alpha = RealValue::rational(p, q).unwrap();
        let gamma = RealValue::rational(r, s).unwrap();
        let params = SpectrumParams::new(alpha.clone(), gamma.clone()).map_err(|e| e.to_string())?;
        let map = NearestMap::new(&alpha).map_err(|e| e.to_string())?;
        let inv = NearestMap::new(&RealValue::rational(q, p).unwrap()).map_err(|e| e.to_string())?;
        let limit = (rat(p, q) / BigRational::from_integer(2.into())).min(rat(1, 2));
        for n in 1..=10_000u64 {
            let f = map.signed_frac(n, 64).map_err(|e| e.to_string())?;
            let h = map.nearest(n).map_err(|e| e.to_string())?;
            if in_agreement_zone(&f, &gamma) == Some(true) {
                let g = params.apply(n).map_err(|e| e.to_string())?;
                ensure(g == h, || format!("alpha={p}/{q} gamma={r}/{s} n={n}: g={g} h={h}"))?;
                zone += 1;
            }
            if f.abs_below(&limit) == Some(true) {
                let back = inv.nearest(h).map_err(|e| e.to_string())?;
                ensure(back == n, || format!("alpha={p}/{q} n={n}: round trip gave {back}"))?;
                trips += 1;
            }
        }
    }
    ensure(zone > 0 && trips > 0, || "no points exercised".into())?;
    Ok(format!("{pairs} additive pairs, {zone} zone points, {trips} round trips"))
}

struct Config {
    p: i64,
    q: i64,
    params: SpectrumParams,
    set: IntegerSet,
}

fn corpus(seed: u64, count: usize, alpha_range: (i64, i64)) -> Vec<Config> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let q = rng.gen_range(1..=40);
        let p = rng.gen_range(alpha_range.0 * q / 40 + 1..=alpha_range.1 * q / 40);
        let s = rng.gen_range(2..=40);
        let r = rng.gen_range(1..s);
        let params = SpectrumParams::new(RealValue::rational(p, q).unwrap(), RealValue::rational(r, s).unwrap()).unwrap();
        let dn = rng.gen_range(10..=30);
        let density = rat(dn, 40);
        let set = random_density_set(&density, 6000, rng.gen()).unwrap();
        let kept: Vec<u64> = set.elements().iter().copied().filter(|&n| params.apply(n).unwrap() >= 1).collect();
        if kept.len() >= 1000 {
            out.push(Config {
                p,
                q,
                params,
                set: IntegerSet::new(kept, 6000).unwrap(),
            });
        }
    }
    out
}

fn partition_and_harmonic() -> Outcome {
    let start = Instant::now();
    let mut configs = corpus(3, 50, (1, 40));
    configs.extend(corpus(33, 50, (40, 400)));
    for c in &configs {
        let cert = injective_partition(&c.params, &c.set).map_err(|e| e.to_string())?;
        let chosen = cert.chosen();
        let images = c.params.map_elements(chosen).map_err(|e| e.to_string())?;
        ensure(images.windows(2).all(|w| w[0] < w[1]), || format!("alpha={}/{}: chosen class not injective", c.p, c.q))?;
        ensure(cert.r as i64 * c.p > c.q && (cert.r as i64 - 1) * c.p <= c.q, || format!("r={} not least", cert.r))?;
        let ineq = hsd_inequality_check(&c.params, chosen).map_err(|e| e.to_string())?;
        ensure(ineq.lhs.exact().is_some(), || "inequality not exact".into())?;
        ensure(ineq.holds, || format!("alpha={}/{}: inequality failed", c.p, c.q))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:.2?}"))?;
    Ok(format!("{} configurations, {t:.2?}", configs.len()))
}

fn density_cases() -> Outcome {
    let mut samples = 0usize;
    for (seed, range, case) in [(4, (1, 40), DensityCase::I), (44, (41, 400), DensityCase::II)] {
        for c in corpus(seed, 50, range) {
            let cert = injective_partition(&c.params, &c.set).map_err(|e| e.to_string())?;
            let class = cert.chosen();
            let mut pts = spectra_core::largeness::density_report(class, 1).map_err(|e| e.to_string())?.prefix_argmax;
            pts.extend(class.elements().iter().copied().step_by(37));
            pts.sort_unstable();
            pts.dedup();
            let cmp = density_transfer_check(&c.params, class, &pts).map_err(|e| e.to_string())?;
            ensure(cmp.case == case, || format!("alpha={}/{}: wrong case", c.p, c.q))?;
            if let Some(bad) = cmp.samples.iter().find(|s| !s.holds) {
                return Err(format!("alpha={}/{} n={}: {} vs {}", c.p, c.q, bad.n, bad.image_side, bad.input_side));
            }
            let window = 50.min(class.universe_bound());
            let b = banach_transfer_check(&c.params, class, window).map_err(|e| e.to_string())?;
            ensure(b.holds, || format!("alpha={}/{}: window transfer failed", c.p, c.q))?;
            samples += cmp.samples.len();
        }
    }
    Ok(format!("100 configurations, {samples} samples"))
}

fn gap_transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphas = ["(0+1*sqrt(2))/1", "(1+1*sqrt(5))/2", "(0+1*sqrt(7))/3", "7/3", "1/5", "5/2", "1"];
    for i in 0..100 {
        let gap = rng.gen_range(1..=25u64);
        let mut xs = vec![10 + rng.gen_range(1..=gap)];
        while *xs.last().unwrap() + gap <= 5000 {
            let next = xs.last().unwrap() + rng.gen_range(1..=gap);
            xs.push(next);
        }
        let set = IntegerSet::new(xs, 5000).unwrap();
        let alpha = if i % 2 == 0 {
            RealValue::parse(alphas[i % alphas.len()]).unwrap()
        } else {
            let q = rng.gen_range(1..=30);
            RealValue::rational(rng.gen_range(q..=20 * q), q).unwrap()
        };
        let params = SpectrumParams::new(alpha, RealValue::rational(rng.gen_range(1..8), 8).unwrap()).unwrap();
        let g = gap_transfer_check(&params, &set).map_err(|e| e.to_string())?;
        ensure(g.holds, || format!("case {i}: image gap {} input gap {}", g.image_max_gap, g.input_max_gap))?;
        ensure(g.input_max_gap <= 2 * gap, || "input not syndetic".into())?;
    }
    Ok("100 syndetic inputs".into())
}

fn prime_corpus() -> Outcome {
    let start = Instant::now();
    let primes = primes_up_to(100_000).map_err(|e| e.to_string())?;
    let h = harmonic_partial_sum(&primes).value;
    ensure(h >= rat(270, 100) && h <= rat(271, 100), || format!("sum {}", h))?;
    // independent float cross-check
    let approx: f64 = primes.elements().iter().map(|&p| 1.0 / p as f64).sum();
    ensure((approx - 2.705).abs() < 0.005, || format!("float sum {approx}"))?;

    let small = primes.truncated(30);
    let ap = longest_ap(&small);
    ensure(ap.length >= 5, || format!("length {}", ap.length))?;
    ensure(ap.terms().collect::<Vec<_>>() == [5, 11, 17, 23, 29], || format!("{ap:?}"))?;

    let params = SpectrumParams::parse("3/2", "1/2").unwrap();
    let image = spectrum_image(&params, &primes).map_err(|e| e.to_string())?;
    let iap = longest_ap(&image);
    ensure(iap.length >= 4 && iap.recheck(&image), || format!("{iap:?}"))?;
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/primes_image_ap.csv"),
    )
    .map_err(|e| e.to_string())?;
    let pinned = format!("ap,input,difference,{},,\r\nap,input,length,{},,\r\nap,input,start,{},,\r\n", iap.difference, iap.length, iap.start);
    ensure(golden.ends_with(&pinned), || "image progression differs from the pinned file".into())?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(20), || format!("took {t:.2?}"))?;
    Ok(format!(
        "sum {}, image progression {}+{}k of length {}, {t:.2?}",
        spectra_core::exact::render_decimal(&h, 6),
        iap.start,
        iap.difference,
        iap.length
    ))
}

fn brute_ap(xs: &[u64]) -> u64 {
    let mut best = xs.len().min(1) as u64;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = xs[j] - xs[i];
            let mut len = 2;
            while xs.contains(&(xs[i] + len * d)) {
                len += 1;
            }
            best = best.max(len);
        }
    }
    best
}

fn naive_j(f: &[Vec<u64>], target: &IntegerSet, a_bound: u64, h_max: usize, domain: ShiftDomain) -> Option<(u64, Vec<usize>)> {
    let m = f[0].len();
    let mut hs: Vec<Vec<usize>> = (1u32..1 << m)
        .map(|mask| (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect::<Vec<_>>())
        .filter(|h: &Vec<usize>| h.len() <= h_max)
        .collect();
    hs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for a in 1..=a_bound {
        if domain == ShiftDomain::TargetMembers && !target.contains(a) {
            continue;
        }
        for h in &hs {
            if f.iter().all(|fi| target.contains(a + h.iter().map(|&i| fi[i - 1]).sum::<u64>())) {
                return Some((a, h.clone()));
            }
        }
    }
    None
}

fn largeness_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..500 {
        let size = rng.gen_range(0..=60);
        let universe = rng.gen_range(60..=400u64);
        let set = IntegerSet::from_unsorted((0..size).map(|_| rng.gen_range(1..=universe)), Some(universe)).unwrap();
        let cert = longest_ap(&set);
        let want = brute_ap(set.elements());
        ensure(cert.length == want && cert.recheck(&set), || format!("trial {trial}: {} vs {want}", cert.length))?;
    }
    let mut found = 0;
    for trial in 0..100 {
        let m = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let functions: Vec<Vec<u64>> = (0..k).map(|_| (0..m).map(|_| rng.gen_range(1..=40)).collect()).collect();
        let step = rng.gen_range(2..=5);
        let target = IntegerSet::from_unsorted(
            (1..=300u64).filter(|&x| x % step == 0 || rng.gen_bool(0.15)),
            Some(300),
        )
        .unwrap();
        let h_max = rng.gen_range(1..=m);
        let domain = if trial % 2 == 0 { ShiftDomain::TargetMembers } else { ShiftDomain::Naturals };
        let got = j_witness_search(&functions, &target, 50, h_max, domain).map_err(|e| e.to_string())?;
        let want = naive_j(&functions, &target, 50, h_max, domain);
        ensure(got.as_ref().map(|w| (w.a, w.h.clone())) == want, || format!("J trial {trial}: {got:?} vs {want:?}"))?;
        if let Some(w) = got {
            ensure(w.recheck(&functions, &target), || format!("J trial {trial}: witness fails recheck"))?;
            found += 1;
        }
    }
    Ok(format!("500 progression sets, 100 J instances ({found} with witnesses)"))
}

fn chain_certificates() -> Outcome {
    let gen = GeneratorSequence::powers(2, 16).unwrap();
    let chain = canonical_ip_chain(&gen, 5).map_err(|e| e.to_string())?;
    let check = FamilyCheck::If(1);
    let v = verify_chain_d(&chain, &check, 64).map_err(|e| e.to_string())?;
    ensure(v.holds, || format!("canonical chain failed: {:?}", v.violations))?;

    let mut tree = CertTree::from_chain(&chain, 2, 8).map_err(|e| e.to_string())?;
    tree.set_branch(vec![2], chain.level(2).clone()).map_err(|e| e.to_string())?;
    for y in [2, 4, 6, 8] {
        tree.set_branch(vec![2, y], chain.level(3).clone()).map_err(|e| e.to_string())?;
    }
    let clean = verify_tree_b(&tree, &check, 2).map_err(|e| e.to_string())?;
    ensure(clean.holds, || format!("unplanted tree failed: {:?}", clean.containment_violations))?;
    let mut planted = chain.level(3).elements().to_vec();
    planted.insert(0, 3);
    tree.set_branch(vec![2, 6], IntegerSet::new(planted, chain.universe_bound()).unwrap())
        .map_err(|e| e.to_string())?;
    let bad = verify_tree_b(&tree, &check, 2).map_err(|e| e.to_string())?;
    ensure(
        !bad.holds && bad.containment_violations == [(vec![2], 6)] && bad.range_violations.is_empty() && bad.family_failures.is_empty(),
        || format!("planted violation reported as {:?}", bad.containment_violations),
    )?;

    let identity = SpectrumParams::parse("1", "1/2").unwrap();
    let report = image_chain_experiment(&identity, &chain, &check, 64).map_err(|e| e.to_string())?;
    ensure(report.image_chain == chain && report.image == report.input, || "identity image chain differs".into())?;
    Ok(format!("{} witnesses, planted violation at [2]+6", v.witnesses.len()))
}

fn cli_determinism() -> Outcome {
    let pipelines: [&[&str]; 9] = [
        &["gen", "primes", "--limit", "5000", "--out", "p.txt"],
        &["gen", "random", "--density", "2/5", "--bound", "3000", "--seed", "11", "--out", "r.txt"],
        &["gen", "fs", "--terms", "1,3,9,27", "--out", "fs.txt"],
        &["gen", "chain", "--terms", "1,2,4,8,16,32,64,128", "--depth", "4", "--out", "c.txt"],
        &["spectrum", "--alpha", "(1+1*sqrt(5))/2", "--gamma", "1/3", "--in", "p.txt", "--out", "s.txt"],
        &["spectrum", "--alpha", "3/2", "--gamma", "1/2", "--in", "s.txt", "--preimage", "--bound", "4000", "--out", "pre.txt"],
        &["analyze", "--in", "r.txt", "--families", "all", "--window", "25", "--report", "a.csv"],
        &["preserve", "--alpha", "2/3", "--gamma", "1/2", "--in", "r.txt", "--families", "all", "--window", "25", "--csv", "pr.csv"],
        &["certify", "--chain", "c.txt", "--family", "if:1", "--alpha", "3/2", "--gamma", "1/2", "--tree-depth", "1", "--report", "ct.csv"],
    ];
    let run = |dir: &Path| -> Result<Vec<(String, Vec<u8>)>, String> {
        let mut outputs = Vec::new();
        for args in pipelines {
            let out = Command::new(env!("CARGO_BIN_EXE_spectra"))
                .current_dir(dir)
                .args(args)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))?;
            outputs.push((format!("{args:?} stdout"), out.stdout));
        }
        let mut names: Vec<_> = std::fs::read_dir(dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
        names.sort();
        for p in names {
            outputs.push((p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()));
        }
        Ok(outputs)
    };
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run(a.path())?;
    let second = run(b.path())?;
    ensure(first.len() == second.len(), || "different file sets".into())?;
    for ((na, da), (nb, db)) in first.iter().zip(&second) {
        ensure(na == nb && da == db, || format!("{na} differs between runs"))?;
    }
    Ok(format!("{} pipelines, {} outputs byte-identical", pipelines.len(), first.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact floor oracle", exact_floor_oracle),
        ("circle and nearest-integer shadows", pointwise_shadows),
        ("injective partition and harmonic inequality", partition_and_harmonic),
        ("density transfer cases", density_cases),
        ("gap transfer", gap_transfer),
        ("prime corpus", prime_corpus),
        ("largeness oracles", largeness_oracles),
        ("chain certificates", chain_certificates),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("[PASS] {} {name}: {detail} ({t:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why} ({t:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
