//! Exit gate: one PASS/FAIL line per criterion, each with a pinned time limit.
//! Run with `cargo test --release --test acceptance -- --nocapture` to see the
//! report.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semisimp::freefunctor::{ul_truncated, verify_h};
use semisimp::invariants::{saturate_marking, tau0, tau1_nerve_round_trip, FinSemicat, Saturation};
use semisimp::lifting::{cospan_left_certificate, horn_completion_stage, horn_filler_scan, verify_certificate, HornScope};
use semisimp::monoidal::{leibniz, tensor, Product};
use semisimp::ordcalc::{adhesivity_check, enumerate_adhesivity_cubes};
use semisimp::search::{find_arrow_isomorphism, find_isomorphism};
use semisimp::sset::{boundary, horn, simplex, simplex_table};
use semisimp::subdiv::{cospan, sd};
use semisimp::{Mode, SSet};

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Duration,
    check: fn() -> Result<(), String>,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_subdivision() -> Result<(), String> {
    for (n, expected) in [(2, vec![7, 12, 6]), (3, vec![15, 50, 60, 24])] {
        let got = sd(&simplex(n), Mode::Plain).sset.f_vector();
        let oracle = common::sd_f_vector(&simplex(n));
        ensure(got == expected && oracle == expected, || format!("Sd Δ{n}: {got:?}, oracle {oracle:?}"))?;
    }
    Ok(())
}

fn c2_tensor() -> Result<(), String> {
    let fv = tensor(&simplex(1), &simplex(1)).sset().f_vector();
    ensure(fv == vec![4, 5, 2], || format!("Δ¹⊗Δ¹ = {fv:?}"))?;
    for a in 0..=3 {
        for b in 0..=3 {
            let t = tensor(&simplex(a), &simplex(b));
            for n in 0..=a + b + 1 {
                let (got, want) = (t.sset().count(n), common::tensor_count(a, b, n));
                ensure(got == want, || format!("a={a} b={b} n={n}: {got} vs {want}"))?;
            }
        }
    }
    Ok(())
}

fn c3_leibniz_join() -> Result<(), String> {
    for a in 0..=3 {
        for b in 0..=3 {
            let l = leibniz(&boundary(a), &boundary(b), Product::Join).map_err(|e| e.to_string())?;
            ensure(find_arrow_isomorphism(&l, &boundary(a + b + 1)).is_some(), || format!("a={a} b={b}"))?;
        }
    }
    Ok(())
}

fn c4_homotopy() -> Result<(), String> {
    let r = verify_h(4);
    ensure(r.failures == 0 && r.cells > 0 && r.composable_pairs > 0, || {
        format!("{} failures, first: {:?}", r.failures, r.first_failure)
    })
}

fn c5_adhesivity() -> Result<(), String> {
    let cubes = enumerate_adhesivity_cubes(4);
    ensure(!cubes.is_empty(), || "no cubes".into())?;
    for cube in &cubes {
        let (back, mono) = adhesivity_check(cube).map_err(|e| e.to_string())?;
        ensure(back == mono, || format!("disagreement on {cube:?}"))?;
    }
    Ok(())
}

fn c6_free_degeneracies() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..10 {
        let x = common::random_complex(&mut rng, 10);
        for d in 0..=5 {
            let ul = ul_truncated(&x, d, Mode::Marked);
            for n in 0..=d {
                let want: usize = (0..=n).map(|k| common::binom(n, k) * x.count(k)).sum();
                ensure(ul.sset.count(n) == want, || format!("trial {trial} d={d} n={n}"))?;
            }
            for (e, s) in ul.simplices(1).iter().enumerate() {
                let want = s.s.cod() == 1 || x.is_marked(s.x);
                ensure(ul.sset.is_marked(e) == want, || format!("trial {trial}: edge {e} marking"))?;
            }
        }
    }
    Ok(())
}

fn c7_tau1() -> Result<(), String> {
    let cats = [
        ("[0]", FinSemicat::chain(0)),
        ("[1]", FinSemicat::chain(1)),
        ("[2]", FinSemicat::chain(2)),
        ("square", FinSemicat::commutative_square()),
        ("Z/2", FinSemicat::cyclic_group(2)),
    ];
    for (name, c) in cats {
        let rt = tau1_nerve_round_trip(&c, 3).map_err(|e| e.to_string())?;
        ensure(rt.is_iso(), || format!("{name}: {rt:?}"))?;
    }
    Ok(())
}

fn c8_tau0() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..20 {
        let a = common::random_complex(&mut rng, 8);
        let b = common::random_complex(&mut rng, 8);
        let t = tensor(&a, &b);
        let (la, ca) = tau0(&a);
        let (lb, cb) = tau0(&b);
        let (lt, ct) = tau0(t.sset());
        ensure(ct == ca * cb && ct == common::component_count(t.sset()), || format!("trial {trial}: counts"))?;
        // The comparison map on components is well defined and bijective.
        let mut image = vec![None; ct];
        for (v, s) in t.simplices(0).iter().enumerate() {
            let pair = (la[s.x], lb[s.y]);
            match image[lt[v]] {
                None => image[lt[v]] = Some(pair),
                Some(p) => ensure(p == pair, || format!("trial {trial}: not well defined"))?,
            }
        }
        let distinct: std::collections::BTreeSet<_> = image.iter().flatten().collect();
        ensure(distinct.len() == ca * cb, || format!("trial {trial}: not bijective"))?;
    }
    Ok(())
}

fn c9_cospan() -> Result<(), String> {
    for n in 0..=3 {
        let c = cospan(&simplex(n), Mode::Plain);
        ensure(c.left.is_cofibration() && c.right.is_cofibration(), || format!("n={n}: legs"))?;
        let (got, want) = (c.summit.sset().f_vector(), common::summit_f_vector(n));
        ensure(got == want, || format!("n={n}: {got:?} vs {want:?}"))?;
    }
    let c0 = cospan(&simplex(0), Mode::Plain);
    ensure(find_isomorphism(c0.summit.sset(), &simplex(1)).is_some(), || "cospan Δ⁰".into())
}

fn c10_left_certificate() -> Result<(), String> {
    let mut problems = Vec::new();
    for mode in [Mode::Plain, Mode::Marked] {
        for n in 0..=3 {
            let (c, f) = cospan_left_certificate(n, mode).map_err(|e| e.to_string())?;
            let verifies = verify_certificate(&c, &f).map_err(|e| e.to_string())?;
            let non_horn = c.attachments.iter().filter(|a| !a.generator.is_horn()).count();
            if !verifies || non_horn > 0 {
                problems.push(format!("{mode:?} n={n}: verifies={verifies}, {non_horn} non-horn cells"));
            }
        }
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn c11_saturation() -> Result<(), String> {
    let t2 = simplex_table(2);
    let d2 = simplex(2).with_marking([t2.index_of(&[0, 1]).unwrap(), t2.index_of(&[1, 2]).unwrap()]).unwrap();
    let s = saturate_marking(&d2, Saturation::TwoOfThree);
    ensure(s.marked().len() == 3, || format!("2-of-3: {:?}", s.marked()))?;
    let t3 = simplex_table(3);
    let d3 = simplex(3).with_marking([t3.index_of(&[0, 2]).unwrap(), t3.index_of(&[1, 3]).unwrap()]).unwrap();
    let s = saturate_marking(&d3, Saturation::TwoOfSix);
    ensure(s == simplex(3).fully_marked(), || format!("2-of-6: {:?}", s.marked()))
}

fn c12_horn_completion() -> Result<(), String> {
    let x: SSet = horn(2, 1).map_err(|e| e.to_string())?.source().clone();
    let c = horn_completion_stage(&x, Mode::Plain, HornScope::Injective).map_err(|e| e.to_string())?;
    ensure(c.result.f_vector() == vec![3, 3, 1], || format!("{:?}", c.result.f_vector()))?;
    ensure(verify_certificate(&c.certificate, &c.inclusion).map_err(|e| e.to_string())?, || "certificate".into())?;
    let before = horn_filler_scan(&x, 2, Mode::Plain, HornScope::Injective);
    let after = horn_filler_scan(&c.result, 2, Mode::Plain, HornScope::Injective);
    let open = |scan: &[semisimp::lifting::HornStatus]| scan.iter().filter(|s| s.n == 2 && s.k == 1 && s.filler.is_none()).count();
    ensure(open(&before) == 1 && open(&after) == 0, || "scan".into())
}

const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "subdivision f-vectors", limit: Duration::from_secs(1), check: c1_subdivision },
    Criterion { id: 2, name: "geometric product counts", limit: Duration::from_secs(5), check: c2_tensor },
    Criterion { id: 3, name: "Leibniz join of boundaries", limit: Duration::from_secs(5), check: c3_leibniz_join },
    Criterion { id: 4, name: "homotopy H up to dimension 4", limit: Duration::from_secs(30), check: c4_homotopy },
    Criterion { id: 5, name: "adhesivity cubes up to size 4", limit: Duration::from_secs(60), check: c5_adhesivity },
    Criterion { id: 6, name: "free degeneracy counts and marks", limit: Duration::from_secs(5), check: c6_free_degeneracies },
    Criterion { id: 7, name: "tau1 of nerves", limit: Duration::from_secs(10), check: c7_tau1 },
    Criterion { id: 8, name: "tau0 of geometric products", limit: Duration::from_secs(5), check: c8_tau0 },
    Criterion { id: 9, name: "subdivision cospan", limit: Duration::from_secs(10), check: c9_cospan },
    Criterion { id: 10, name: "left leg horn certificates", limit: Duration::from_secs(60), check: c10_left_certificate },
    Criterion { id: 11, name: "marking saturation", limit: Duration::from_secs(1), check: c11_saturation },
    Criterion { id: 12, name: "horn completion of an inner horn", limit: Duration::from_secs(1), check: c12_horn_completion },
];

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let result = (c.check)();
        let took = start.elapsed();
        let verdict = match &result {
            Ok(()) if took <= c.limit => "PASS",
            _ => "FAIL",
        };
        let detail = match result {
            Err(e) => format!(": {e}"),
            Ok(()) if took > c.limit => ": over the time limit".to_string(),
            Ok(()) => String::new(),
        };
        println!("{verdict} {:>2} {} ({} ms, limit {} ms){detail}", c.id, c.name, took.as_millis(), c.limit.as_millis());
        if verdict == "FAIL" {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
