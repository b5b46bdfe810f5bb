//! Acceptance suite. Each test prints one PASS/FAIL line for its criterion
//! and then asserts it. Numeric checks are exact; runtime budgets are the
//! wall-clock limits listed next to each criterion.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use ntramp::codes::{
    build_one_point_code, dimension_jumps, filtration_dimension, leakage, uncertainty,
    NestedCodePair,
};
use ntramp::curve::{enumerate_points, validate_params, CurveParams, PointPartition};
use ntramp::finite_field::{FieldElement, FieldSpec};
use ntramp::linalg::rank;
use ntramp::qualifying::{decompose_structure, enumerate_variants};
use ntramp::ramp::{access_numbers, access_numbers_for_levels, deal, reconstruct, Scheme};
use ntramp::rghw::{
    brute_force_rghw, dual_footprint_count, dual_semigroup_count, footprint_count,
    rghw_dual_bound, rghw_primary_bound, semigroup_count, staircase_closed_form, GammaSet,
    OracleOptions,
};
use ntramp::semigroup::{gap_count, h_star, in_semigroup, iota};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameter sets small enough for exhaustive checks on a desktop.
const DESK: &[(u64, u32, u64)] = &[
    (2, 2, 1),
    (2, 2, 3),
    (2, 3, 7),
    (3, 2, 2),
    (3, 2, 4),
    (3, 3, 13),
    (4, 2, 1),
    (4, 2, 5),
    (4, 3, 7),
    (5, 2, 3),
    (5, 2, 6),
];

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "criterion {id:>2} [{name}]: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn partition(q: u64, s: u32, u: u64) -> Arc<PointPartition> {
    Arc::new(enumerate_points(&validate_params(q, s, u).unwrap()).unwrap())
}

fn params(q: u64, s: u32, u: u64) -> CurveParams {
    validate_params(q, s, u).unwrap()
}

#[test]
fn criterion_01_curve_fixtures() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let big = partition(4, 3, 7);
    let sizes: Vec<usize> = big.departments.iter().map(Vec::len).collect();
    if big.n() != 352 || sizes != vec![16, 112, 112, 112] {
        failures.push(format!("(4,3,7): n={} sizes={sizes:?}", big.n()));
    }
    let herm = partition(4, 2, 5);
    if herm.n() != 64 {
        failures.push(format!("(4,2,5): n={}", herm.n()));
    }
    // every pair (x, y) of the field tested against x^u = Tr(y)
    for part in [&big, &herm] {
        let f = &part.field;
        let q = part.params.q;
        let mut roots = BTreeSet::new();
        for x in f.elements() {
            let lhs = f.pow(x, part.params.u);
            for y in f.elements() {
                let tr = (0..part.params.s).fold(FieldElement::ZERO, |acc, k| {
                    f.add(acc, f.pow(y, q.pow(k)))
                });
                if lhs == tr {
                    roots.insert((x, y));
                }
            }
        }
        let ours: BTreeSet<_> = part.points.iter().map(|p| (p.x, p.y)).collect();
        if roots != ours {
            failures.push(format!("{:?}: point set differs from exhaustive roots", part.params));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(1);
    report(1, "curve fixtures", ok, format!("{failures:?}, {elapsed:?} < 1s"));
}

#[test]
fn criterion_02_worked_example_tables() {
    let start = Instant::now();
    let p = params(4, 3, 7);
    let pool = [90, 91, 92];
    let prim: Vec<u64> = (1..=3)
        .map(|m| rghw_primary_bound(&p, m, 92, 87, Some(&pool)).unwrap().value)
        .collect();
    let dual: Vec<u64> = (1..=3)
        .map(|m| rghw_dual_bound(&p, m, 92, 87, Some(&pool)).unwrap().value)
        .collect();
    let single_p: Vec<u64> = rghw_primary_bound(&p, 1, 92, 87, Some(&pool))
        .unwrap()
        .per_subset
        .iter()
        .map(|s| s.count)
        .collect();
    let single_d: Vec<u64> = rghw_dual_bound(&p, 1, 92, 87, Some(&pool))
        .unwrap()
        .per_subset
        .iter()
        .map(|s| s.count)
        .collect();
    let gs = |g: &[u64]| GammaSet::new(&p, g).unwrap();
    // the printed pairwise 276 is the count for {88, 90}
    let pair_variant = footprint_count(&gs(&[88, 90]));
    let rep = access_numbers_for_levels(&p, 92, 87, Some(&pool)).unwrap();
    let elapsed = start.elapsed();
    let ok = prim == [260, 274, 295]
        && dual == [14, 33, 40]
        && single_p == [262, 261, 260]
        && single_d == [28, 14, 25]
        && pair_variant == 276
        && rep.swapped.t == [259, 273, 294]
        && rep.swapped.r == [313, 320, 339]
        && rep.t == [13, 32, 39]
        && rep.r == [58, 79, 93]
        && elapsed < Duration::from_secs(1);
    report(
        2,
        "worked example tables",
        ok,
        format!(
            "M={prim:?} Mdual={dual:?} singles={single_p:?}/{single_d:?} \
             {{88,90}}={pair_variant} swapped t={:?} r={:?}, {elapsed:?} < 1s",
            rep.swapped.t, rep.swapped.r
        ),
    );
}

#[test]
fn criterion_03_hermitian_fixtures() {
    let p = params(4, 2, 5);
    let a = iota(&p, 66).unwrap();
    let b = iota(&p, 67).unwrap();
    let m1 = rghw_primary_bound(&p, 1, 67, 65, None).unwrap().value;
    let m2 = rghw_primary_bound(&p, 2, 67, 65, None).unwrap().value;
    let ok = (a.i, a.j) == (14, 2) && (b.i, b.j) == (13, 3) && (m1, m2) == (3, 5);
    report(
        3,
        "hermitian fixtures",
        ok,
        format!("iota(66)=({},{}) iota(67)=({},{}) M=({m1},{m2})", a.i, a.j, b.i, b.j),
    );
}

#[test]
fn criterion_04_single_department_closed_forms() {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = Vec::new();
    for q in [3u64, 4, 5] {
        for s in 2u32.. {
            if q.pow(s) > 64 {
                break;
            }
            let norm_exp = (q.pow(s) - 1) / (q - 1);
            for u in (1..=norm_exp).filter(|u| norm_exp % u == 0) {
                let p = params(q, s, u);
                let qs1 = p.y_bound();
                for tau in 1..=q - 2 {
                    let lambda1 = tau * u * qs1;
                    let rep = access_numbers_for_levels(&p, lambda1, lambda1 - 1, None).unwrap();
                    let t = (tau - 1) * u * qs1 + qs1 + u - 1;
                    let r = tau * u * qs1 + 1;
                    cases += 1;
                    let pair = iota(&p, lambda1).unwrap();
                    if rep.ell != 1
                        || (pair.i, pair.j) != (tau * u, 0)
                        || rep.t != [t]
                        || rep.r != [r]
                        || rep.r[0] - rep.t[0] != (qs1 - 1) * (u - 1) + 1
                    {
                        failures.push(format!("({q},{s},{u}) tau={tau}: t={:?} r={:?}", rep.t, rep.r));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && cases > 0 && elapsed < Duration::from_secs(30);
    report(
        4,
        "single-department closed forms",
        ok,
        format!("{cases} cases, failures {failures:?}, {elapsed:?} < 30s"),
    );
}

#[test]
fn criterion_05_oracle_sharpness() {
    let start = Instant::now();
    let part = partition(2, 2, 3);
    let hs = h_star(&part.params);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (&l2, &l1) in hs.members.iter().tuple_combinations() {
        if hs.count_up_to(l1) > 4 {
            continue;
        }
        let pair = NestedCodePair::one_point(&part, l1, l2).unwrap();
        for t in 1..=pair.ell {
            let exact = brute_force_rghw(&pair, t, OracleOptions::default()).unwrap().value;
            let bound = rghw_primary_bound(&part.params, t, l1, l2, None).unwrap().value;
            checked += 1;
            if exact != bound {
                failures.push(format!("({l1},{l2}) t={t}: oracle {exact} bound {bound}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && checked > 0 && elapsed < Duration::from_secs(300);
    report(
        5,
        "oracle sharpness",
        ok,
        format!("{checked} (levels, t) cases, failures {failures:?}, {elapsed:?} < 300s"),
    );
}

#[test]
fn criterion_06_identity_of_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = Vec::new();
    let stars: Vec<_> = DESK
        .iter()
        .map(|&(q, s, u)| (params(q, s, u), h_star(&params(q, s, u)).members))
        .collect();
    for _ in 0..1000 {
        let (p, members) = &stars[rng.gen_range(0..stars.len())];
        let w = rng.gen_range(1..=4.min(members.len()));
        let picks: Vec<u64> = (0..w).map(|_| members[rng.gen_range(0..members.len())]).collect();
        let gs = GammaSet::new(p, &picks).unwrap();
        if footprint_count(&gs) != semigroup_count(&gs)
            || dual_footprint_count(&gs) != dual_semigroup_count(&gs)
        {
            mismatches.push(format!("{p:?} {:?}", gs.gammas));
        }
    }
    let p = params(2, 2, 3);
    let members = h_star(&p).members;
    let mut exhaustive = 0;
    for k in 1..=members.len() {
        for combo in members.iter().copied().combinations(k) {
            let gs = GammaSet::new(&p, &combo).unwrap();
            exhaustive += 1;
            if footprint_count(&gs) != semigroup_count(&gs)
                || dual_footprint_count(&gs) != dual_semigroup_count(&gs)
            {
                mismatches.push(format!("(2,2,3) {combo:?}"));
            }
        }
    }
    report(
        6,
        "identity of bounds",
        mismatches.is_empty(),
        format!("1000 random + {exhaustive} exhaustive sets, mismatches {mismatches:?}"),
    );
}

fn random_chain(p: &CurveParams, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let w = rng.gen_range(1..=4usize);
    let a1 = rng.gen_range(0..=p.outside_x_count());
    let top = (a1 + p.u - 1).min(p.x_bound() - 1);
    let mut rest: Vec<u64> = (a1 + 1..=top).collect();
    let mut a = vec![a1];
    for _ in 1..w.min(rest.len() + 1) {
        a.push(rest.swap_remove(rng.gen_range(0..rest.len())));
    }
    a.sort_unstable();
    let mut ys: Vec<u64> = (0..p.y_bound()).collect();
    let mut b: Vec<u64> = (0..a.len().min(ys.len()))
        .map(|_| ys.swap_remove(rng.gen_range(0..ys.len())))
        .collect();
    b.sort_unstable_by(|x, y| y.cmp(x));
    a.iter().zip(&b).map(|(&i, &j)| i * p.y_bound() + j * p.u).collect()
}

#[test]
fn criterion_07_staircase_closed_form() {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (q, s, u) in [(2, 2, 3), (3, 2, 2)] {
        let p = params(q, s, u);
        let members = h_star(&p).members;
        for k in 1..=members.len() {
            for combo in members.iter().copied().combinations(k) {
                let gs = GammaSet::new(&p, &combo).unwrap();
                if let Ok(v) = staircase_closed_form(&gs) {
                    checked += 1;
                    if v != footprint_count(&gs) {
                        mismatches.push(format!("({q},{s},{u}) {combo:?}"));
                    }
                }
            }
        }
    }
    let p = params(4, 3, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random = 0;
    while random < 500 {
        let gs = GammaSet::new(&p, &random_chain(&p, &mut rng)).unwrap();
        match staircase_closed_form(&gs) {
            Ok(v) => {
                random += 1;
                if v != footprint_count(&gs) {
                    mismatches.push(format!("(4,3,7) {:?}", gs.gammas));
                }
            }
            Err(e) => mismatches.push(format!("generated chain rejected: {:?} {e}", gs.gammas)),
        }
    }
    report(
        7,
        "staircase closed form",
        mismatches.is_empty() && checked > 0,
        format!("{checked} exhaustive + {random} random chains, mismatches {mismatches:?}"),
    );
}

/// Every vector of length `len` over the field, including the empty one.
fn all_vectors(field: &FieldSpec, len: usize) -> Vec<Vec<FieldElement>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    (0..len)
        .map(|_| field.elements().collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect()
}

#[test]
fn criterion_08_scheme_behaviour() {
    let start = Instant::now();
    let part = partition(2, 2, 3);
    let hs = h_star(&part.params);
    let mut failures = Vec::new();
    let mut schemes = 0;
    let mut roundtrips = 0u64;
    for (&l2, &l1) in hs.members.iter().tuple_combinations() {
        if hs.count_up_to(l1) > 4 {
            continue;
        }
        let scheme = Scheme::one_point(&part, l1, l2).unwrap();
        let ell = scheme.ell();
        let acc = access_numbers(&scheme).unwrap();
        let (t1, rl) = (acc.t[0] as usize, acc.r[ell - 1] as usize);
        schemes += 1;
        for mask in 0u32..256 {
            let set: Vec<usize> = (0..8).filter(|i| mask >> i & 1 == 1).collect();
            let leak = leakage(&scheme.pair, &set).unwrap();
            let unc = uncertainty(&scheme.pair, &set).unwrap();
            if leak + unc != ell {
                failures.push(format!("({l1},{l2}) {set:?}: {leak}+{unc} != {ell}"));
            }
            if set.len() == t1 && leak != 0 {
                failures.push(format!("({l1},{l2}) {set:?}: t_1 set leaks {leak}"));
            }
            if set.len() == rl && leak != ell {
                failures.push(format!("({l1},{l2}) {set:?}: r_ell set leaks {leak}"));
            }
        }
        let full_sets: Vec<Vec<usize>> = (0..8)
            .combinations(rl)
            .filter(|s| leakage(&scheme.pair, s).unwrap() == ell)
            .collect();
        for secret in all_vectors(&part.field, ell) {
            for randomness in all_vectors(&part.field, scheme.k2()) {
                let sh = deal(&scheme, &secret, &randomness).unwrap();
                for set in &full_sets {
                    roundtrips += 1;
                    let rec = reconstruct(&scheme, set, &sh.restrict(set)).unwrap();
                    if rec.secret.as_ref() != Some(&secret) {
                        failures.push(format!("({l1},{l2}) {set:?}: round trip failed"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    failures.truncate(10);
    let ok = failures.is_empty() && schemes > 0 && elapsed < Duration::from_secs(60);
    report(
        8,
        "scheme behaviour",
        ok,
        format!("{schemes} schemes, {roundtrips} round trips, failures {failures:?}, {elapsed:?} < 60s"),
    );
}

/// Checks every variant for `gammas`; returns the number checked.
fn check_variants(scheme: &Scheme, gammas: &GammaSet, limit: usize, failures: &mut Vec<String>) -> Vec<Vec<usize>> {
    let part = scheme.partition();
    let levels = scheme.pair.levels.unwrap();
    let w = gammas.len();
    let m_w = rghw_primary_bound(
        &part.params,
        w,
        levels.lambda1,
        levels.lambda2,
        scheme.pool.as_deref(),
    )
    .unwrap()
    .value as usize;
    let variants = enumerate_variants(scheme, gammas, limit).unwrap();
    if variants.is_empty() {
        failures.push(format!("{:?} {:?}: no variants", part.params, gammas.gammas));
    }
    let mut sets = Vec::new();
    for v in variants {
        let tag = format!("{:?} {:?} i'={}", part.params, gammas.gammas, v.choice.i_prime);
        if v.indices.len() != part.n() - m_w {
            failures.push(format!("{tag}: |A|={} expected {}", v.indices.len(), part.n() - m_w));
        }
        if uncertainty(&scheme.pair, &v.indices).unwrap() < w {
            failures.push(format!("{tag}: uncertainty below {w}"));
        }
        match decompose_structure(part, &v.indices, &v.choice, gammas) {
            Ok(st) => {
                let mut parts: Vec<usize> = Vec::new();
                for &d in &st.full_departments {
                    parts.extend(&part.departments[d]);
                }
                if st.a0_included {
                    parts.extend(&part.departments[0]);
                }
                if let Some(slab) = &st.slab {
                    parts.extend(&slab.indices);
                }
                parts.extend(&st.staircase);
                let distinct: BTreeSet<usize> = parts.iter().copied().collect();
                let whole: BTreeSet<usize> = v.indices.iter().copied().collect();
                if distinct.len() != parts.len() || distinct != whole {
                    failures.push(format!("{tag}: parts overlap or miss points"));
                }
                let qs1 = part.params.y_bound() as usize;
                if st.cardinality(part) != v.indices.len()
                    || v.indices.len() != v.choice.alphas.len() * qs1 + st.staircase.len()
                {
                    failures.push(format!("{tag}: cardinality identity fails"));
                }
            }
            Err(e) => failures.push(format!("{tag}: {e}")),
        }
        sets.push(v.indices);
    }
    sets
}

#[test]
fn criterion_09_qualifying_sets() {
    let mut failures = Vec::new();
    let mut families = 0;
    let mut emitted = 0;
    // minimizers outside the closed-form staircase regime have no construction
    let mut skipped = 0;

    // minimizers of every dimension on a few schemes
    for (q, s, u, l1, l2, pool) in [
        (4u64, 3u32, 7u64, 92u64, 87u64, Some(vec![90u64, 91, 92])),
        (4, 3, 7, 92, 87, None),
        (4, 2, 5, 67, 65, None),
        (3, 2, 4, 14, 9, None),
        (2, 2, 3, 4, 0, None),
    ] {
        let part = partition(q, s, u);
        let mut scheme = Scheme::one_point(&part, l1, l2).unwrap();
        scheme.pool = pool.clone();
        let ell = pool.as_ref().map_or(scheme.ell(), Vec::len);
        for w in 1..=ell {
            let best = rghw_primary_bound(&part.params, w, l1, l2, pool.as_deref()).unwrap();
            let gs = best.minimizing_gammas;
            if staircase_closed_form(&gs).is_err() && gs.pairs.iter().map(|e| e.i).min().unwrap() <= part.params.outside_x_count() {
                skipped += 1;
                continue;
            }
            families += 1;
            emitted += check_variants(&scheme, &gs, 40, &mut failures).len();
        }
    }

    // department unions for a single large-department jump
    let mut unions_found = true;
    for (q, s, u) in [(4u64, 2u32, 5u64), (5, 2, 3), (4, 3, 7)] {
        let part = partition(q, s, u);
        let qs1 = part.params.y_bound();
        for tau in 1..=q - 2 {
            let l1 = tau * u * qs1;
            let scheme = Scheme::one_point(&part, l1, l1 - 1).unwrap();
            let gs = GammaSet::new(&part.params, &[l1]).unwrap();
            families += 1;
            let sets: BTreeSet<Vec<usize>> =
                check_variants(&scheme, &gs, 10_000, &mut failures).into_iter().collect();
            emitted += sets.len();
            for depts in (1..q as usize).combinations(tau as usize) {
                let mut union: Vec<usize> = depts.iter().flat_map(|&d| part.departments[d].clone()).collect();
                union.sort_unstable();
                if !sets.contains(&union) {
                    unions_found = false;
                    failures.push(format!("({q},{s},{u}) tau={tau}: union {depts:?} missing"));
                }
            }
        }
    }
    failures.truncate(10);
    report(
        9,
        "qualifying sets",
        failures.is_empty() && unions_found && families > 0,
        format!("{families} gamma families, {skipped} skipped, {emitted} sets, failures {failures:?}"),
    );
}

#[test]
fn criterion_10_gap_identity() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for &(q, s, u) in DESK {
        let p = params(q, s, u);
        for lambda in (0..=200).filter(|&l| in_semigroup(&p, l)) {
            checked += 1;
            let g = gap_count(&p, lambda).unwrap();
            if g != lambda {
                failures.push(format!("({q},{s},{u}) lambda={lambda}: {g}"));
            }
        }
    }
    report(
        10,
        "gap identity",
        failures.is_empty(),
        format!("{checked} semigroup elements, failures {failures:?}"),
    );
}

#[test]
fn criterion_11_dimension_jumps() {
    let mut failures = Vec::new();
    for (q, s, u) in [(2, 2, 3), (3, 2, 2)] {
        let part = partition(q, s, u);
        let hs = h_star(&part.params);
        let top = *hs.members.last().unwrap() + part.params.y_bound() * part.params.u;
        let jumps = dimension_jumps(&part, top);
        if jumps != hs.members {
            failures.push(format!("({q},{s},{u}) jumps {jumps:?}"));
        }
        let mut prev = 0;
        let mut code_jumps = Vec::new();
        for lambda in 0..=top {
            let code = build_one_point_code(&part, lambda);
            let r = rank(&part.field, &code.generator);
            if r != code.dimension() || r != filtration_dimension(&part, lambda) {
                failures.push(format!("({q},{s},{u}) lambda={lambda}: rank {r}"));
            }
            if r > prev {
                code_jumps.push(lambda);
            }
            prev = r;
        }
        if code_jumps != hs.members {
            failures.push(format!("({q},{s},{u}) code jumps {code_jumps:?}"));
        }
    }
    let big = partition(4, 3, 7);
    let d87 = filtration_dimension(&big, 87);
    let d88 = filtration_dimension(&big, 88);
    if d88 <= d87 || !h_star(&big.params).contains(88) {
        failures.push(format!("(4,3,7): dim at 87 = {d87}, at 88 = {d88}"));
    }
    report(
        11,
        "dimension jumps",
        failures.is_empty(),
        format!("88 in H*(Q): dim {d87} -> {d88}; failures {failures:?}"),
    );
}
