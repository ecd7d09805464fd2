//! Acceptance criteria. Each one prints a single PASS/FAIL line; the
//! process exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use qmut::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn determinant_law() -> Outcome {
    let mut checked = 0;
    for n in 2..=8 {
        for m in a_n_class(n).map_err(|e| e.to_string())?.quivers() {
            let p = presentation_of(m).map_err(|e| e.to_string())?;
            let det: BigInt = cartan_det(&p).map_err(|e| e.to_string())?;
            let expected = BigInt::from(1) << count_3cycles(m);
            ensure(det == expected, || format!("{m:?}: det {det}, expected {expected}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} members, det = 2^t exactly"))
}

fn class_characterization() -> Outcome {
    for n in 2..=5 {
        let bfs = a_n_class(n).map_err(|e| e.to_string())?.form_set();
        let direct = enumerate_qn_directly(n).map_err(|e| e.to_string())?.form_set();
        ensure(bfs == direct, || format!("n={n}: {} vs {} classes", bfs.len(), direct.len()))?;
    }
    Ok("mutation class = membership filter for n = 2..5".into())
}

fn closure() -> Outcome {
    let mut checked = 0;
    for n in 2..=7 {
        for m in a_n_class(n).map_err(|e| e.to_string())?.quivers() {
            for v in 0..n {
                let next = m.mutate(v).map_err(|e| e.to_string())?;
                ensure(is_in_qn(&next).member, || format!("{m:?} at {v}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} single mutations stay in the class"))
}

fn normal_form_soundness() -> Outcome {
    let mut checked = 0;
    for n in 2..=7 {
        for m in a_n_class(n).map_err(|e| e.to_string())?.quivers() {
            let seq = reduce_to_normal_form(m).map_err(|e| format!("{m:?}: {e}"))?;
            let check = verify_sequence(&seq);
            ensure(check.valid, || format!("{m:?}: {:?}", check.failure))?;
            let target = normal_form_target(ClassSignature::of(m)).map_err(|e| e.to_string())?;
            ensure(is_isomorphic(seq.end(), &target), || format!("{m:?} did not reach the target"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} reductions verified"))
}

fn restricted_reachability_all_pairs() -> Outcome {
    let mut pairs = 0;
    for n in 2..=6 {
        let class = a_n_class(n).map_err(|e| e.to_string())?;
        let members: Vec<&Quiver> = class.quivers().collect();
        for a in &members {
            for b in &members {
                if count_3cycles(a) != count_3cycles(b) {
                    continue;
                }
                let seq = restricted_reachability(a, b, 100_000).map_err(|e| format!("{a:?} -> {b:?}: {e}"))?;
                ensure(verify_sequence(&seq).valid && is_isomorphic(seq.end(), b), || {
                    format!("{a:?} -> {b:?}: bad sequence")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs connected"))
}

fn derived_partition() -> Outcome {
    for n in 2..=7 {
        let class = a_n_class(n).map_err(|e| e.to_string())?;
        let pres: Vec<GentlePresentation> = class
            .quivers()
            .map(presentation_of)
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, p) in pres.iter().enumerate() {
            let mut home = None;
            for (k, b) in blocks.iter().enumerate() {
                if derived_equivalent(&pres[b[0]], p).map_err(|e| e.to_string())? {
                    home = Some(k);
                    break;
                }
            }
            match home {
                Some(k) => blocks[k].push(i),
                None => blocks.push(vec![i]),
            }
        }
        let expected = (n - 1) / 2 + 1;
        ensure(blocks.len() == expected, || format!("n={n}: {} blocks, expected {expected}", blocks.len()))?;
        let mut by_det: BTreeMap<i64, BTreeSet<usize>> = BTreeMap::new();
        for (i, p) in pres.iter().enumerate() {
            by_det.entry(cartan_det(p).map_err(|e| e.to_string())?).or_default().insert(i);
        }
        let ours: BTreeSet<BTreeSet<usize>> = blocks.into_iter().map(|b| b.into_iter().collect()).collect();
        let theirs: BTreeSet<BTreeSet<usize>> = by_det.into_values().collect();
        ensure(ours == theirs, || format!("n={n}: partition differs from determinant partition"))?;
    }
    Ok("one block per feasible t for n = 2..7".into())
}

fn gentleness() -> Outcome {
    let mut checked = 0;
    for n in 2..=8 {
        for m in a_n_class(n).map_err(|e| e.to_string())?.quivers() {
            let p = presentation_of(m).map_err(|e| e.to_string())?;
            let report = check_gentle(&p);
            ensure(report.gentle, || format!("{m:?}: {:?}", report.violations))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} presentations gentle"))
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=10);
        let mut rows = vec![vec![0i32; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let b = rng.gen_range(-3..=3);
                rows[i][j] = b;
                rows[j][i] = -b;
            }
        }
        let q = Quiver::from_exchange_matrix(&rows).map_err(|e| e.to_string())?;
        let v = rng.gen_range(0..n);
        let back = q.mutate(v).and_then(|m| m.mutate(v)).map_err(|e| e.to_string())?;
        ensure(back == q, || format!("{q:?} at {v}"))?;
    }
    let mut steps_checked = 0;
    for _ in 0..1000 {
        let mut q = Quiver::empty(1);
        let mut det = BigInt::from(1);
        for _ in 0..rng.gen_range(1..=10) {
            let v = rng.gen_range(0..q.vertex_count());
            let (step, factor) = if rng.gen() {
                let o = if rng.gen() { Orientation::Clockwise } else { Orientation::Counterclockwise };
                (Enlargement::Cycle(v, o), 2)
            } else {
                let d = if rng.gen() { Direction::In } else { Direction::Out };
                (Enlargement::Pendant(v, d), 1)
            };
            let Ok(next) = step.apply(&q) else { continue };
            if !is_in_qn(&next).member {
                continue;
            }
            q = next;
            det *= factor;
            let got: BigInt = cartan_det(&presentation_of(&q).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(got == det, || format!("{q:?}: det {got}, expected {det}"))?;
            steps_checked += 1;
        }
    }
    for n in 1..=8 {
        for m in a_n_class(n).map_err(|e| e.to_string())?.quivers() {
            let basis = path_basis(&presentation_of(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(basis.iter().all(|p| p.len() <= n), || format!("{m:?}: long path"))?;
        }
    }
    Ok(format!("10000 involutions, {steps_checked} enlargement steps, path bound on n <= 8"))
}

fn main() -> std::process::ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("cartan determinant law", determinant_law),
        ("class characterization", class_characterization),
        ("closure under mutation", closure),
        ("normal-form soundness", normal_form_soundness),
        ("restricted reachability", restricted_reachability_all_pairs),
        ("derived-equivalence partition", derived_partition),
        ("gentleness", gentleness),
        ("property suite", property_suite),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                println!("FAIL {}. {name}: {why} ({secs:.2}s)", i + 1);
                failed.push(*name);
            }
        }
    }
    if failed.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
