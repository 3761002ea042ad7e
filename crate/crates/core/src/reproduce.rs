//! The acceptance matrix: eleven end-to-end checks with pinned seeds and
//! budgets, each cross-checked against an oracle that does not share code
//! with the routine under test where that is practical.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{
    admissible_actions, brute_force_orders, cohomology_orders, invariant_element, DEFAULT_I_MAX,
};
use crate::geometry::{fiber_check, jacobian_rank};
use crate::gluing::{completely_p_glued, default_s_cap, GluingTree, SemigroupGens};
use crate::poly::{buchberger, GroebnerBasis, IntPoly, Monomial, MonomialOrder, PrimeField};
use crate::sci::{
    build_certificate, full_ideal_point_survey, point_survey, verify_char_p, SurveyMode,
    DEFAULT_ENUMERATION_BUDGET,
};
use crate::toric::{quadratic_generators, rewrite, Binomial, GeneratorStyle, TypeStarBinomial};
use crate::veronese::{binomial, IndexTuple, Veronese, VeroneseParams};

pub const ACCEPTANCE_SEED: u64 = 0x5eed_0001;

/// Parameter sets `(n, p, h)` used by the gluing and certificate checks.
pub const GLUING_PARAMS: [(usize, u64, u32); 4] = [(3, 2, 1), (4, 2, 1), (3, 3, 1), (3, 2, 2)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_ms: u64,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({} ms / {} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

type Check = fn() -> Result<String, String>;

const CRITERIA: [(u8, &str, u64, Check); 11] = [
    (1, "cardinality of T", 1_000, cardinality),
    (2, "golden quadratic generators", 1_000, golden_generators),
    (3, "degree-2 generation", 30_000, degree_two_generation),
    (4, "complete p-gluing", 30_000, gluing),
    (
        5,
        "char-p Frobenius certificate",
        60_000,
        char_p_certificate,
    ),
    (6, "char-p point equality", 1_000, char_p_points),
    (7, "refutation away from char p", 60_000, refutation),
    (8, "full ideal cuts V", 30_000, full_ideal),
    (9, "Jacobian rank", 10_000, jacobian),
    (10, "Galois fibers", 10_000, fibers),
    (11, "cyclic cohomology", 5_000, cohomology),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based). A check also fails when it overruns its
/// time limit.
pub fn run_criterion(id: u8) -> Option<CriterionOutcome> {
    let &(id, title, limit_ms, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let res = check();
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_millis(limit_ms);
    let (passed, mut detail) = match res {
        Ok(d) => (in_time, d),
        Err(e) => (false, e),
    };
    if !in_time {
        detail = format!("time limit exceeded; {detail}");
    }
    Some(CriterionOutcome {
        id,
        title: title.to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_millis() as u64,
        limit_ms,
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ver(n: usize, p: u64, h: u32) -> Result<Veronese, String> {
    Ok(Veronese::new(
        VeroneseParams::new(n, p, h).map_err(|e| e.to_string())?,
    ))
}

/// C(m, k) from Pascal's rule, independent of the multiplicative formula.
fn pascal(m: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn cardinality() -> Result<String, String> {
    let mut checked = 0;
    for n in 1..=6 {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2)] {
            let v = ver(n, p, h)?;
            let q = v.q() as usize;
            let want = pascal(n + q - 1, q);
            ensure(v.len() as u64 == want, || {
                format!("n={n} q={q}: |T| = {} != {want}", v.len())
            })?;
            ensure(binomial((n + q - 1) as u64, q as u64) == Some(want), || {
                format!("binomial helper disagrees at n={n} q={q}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, q) pairs"))
}

/// Set of binomials as polynomials, each normalized so that its lex-largest
/// term has coefficient +1.
fn up_to_sign(polys: impl IntoIterator<Item = IntPoly>) -> BTreeSet<Vec<(Vec<u32>, BigInt)>> {
    polys
        .into_iter()
        .filter(|f| !f.is_zero())
        .map(|f| {
            let mut terms: Vec<(Vec<u32>, BigInt)> = f
                .terms()
                .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
                .collect();
            terms.sort();
            if terms.last().is_some_and(|t| t.1 < BigInt::from(0)) {
                for t in &mut terms {
                    t.1 = -t.1.clone();
                }
            }
            terms
        })
        .collect()
}

fn golden_generators() -> Result<String, String> {
    let v = ver(3, 2, 1)?;
    let names = v.variable_names();
    let lookup = |s: &str| names.iter().position(|x| x == s);
    let example = [
        "x12^2 - x11*x22",
        "x13^2 - x11*x33",
        "x23^2 - x22*x33",
        "x12*x33 - x13*x23",
        "x13*x22 - x12*x23",
        "x23*x11 - x12*x13",
    ];
    let golden = up_to_sign(
        example
            .iter()
            .map(|s| IntPoly::parse(s, lookup, v.len()).expect("golden text parses")),
    );
    let ours = quadratic_generators(&v, GeneratorStyle::Star);
    let ours_set = up_to_sign(ours.iter().map(Binomial::to_int_poly));
    ensure(ours.len() == 6 && ours_set == golden, || {
        let shown: Vec<String> = ours.iter().map(|b| b.format(&names)).collect();
        format!("generators {shown:?} differ from the example")
    })?;

    // 2x2 minors of the symmetric matrix (x_{min(i,j) max(i,j)})
    let entry = |i: u16, j: u16| Monomial::var(v.len(), v.index_of_multiset(&[i, j]).unwrap(), 1);
    let mut minors = Vec::new();
    for r in [(1, 2), (1, 3), (2, 3)] {
        for c in [(1, 2), (1, 3), (2, 3)] {
            let m = IntPoly::binomial(
                entry(r.0, c.0).mul(&entry(r.1, c.1)),
                entry(r.0, c.1).mul(&entry(r.1, c.0)),
            );
            minors.push(m);
        }
    }
    let minors = up_to_sign(minors);
    let full = up_to_sign(
        quadratic_generators(&v, GeneratorStyle::Full)
            .iter()
            .map(Binomial::to_int_poly),
    );
    ensure(minors == golden && full == golden, || {
        format!(
            "{} distinct minors, {} full generators",
            minors.len(),
            full.len()
        )
    })?;
    Ok("six example binomials; equal to the six distinct symmetric 2-minors".into())
}

fn random_type_star(v: &Veronese, rng: &mut ChaCha8Rng) -> TypeStarBinomial {
    let q = v.q() as usize;
    loop {
        let s = rng.gen_range(2..=3);
        let blocks: Vec<IndexTuple> = (0..s)
            .map(|_| v.tuples()[rng.gen_range(0..v.len())].clone())
            .collect();
        let mut sigma: Vec<usize> = (1..=s * q).collect();
        sigma.shuffle(rng);
        let f = TypeStarBinomial { blocks, sigma };
        if f.left_monomial(v).ok() != f.right_monomial(v).ok() {
            return f;
        }
    }
}

fn degree_two_generation() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED);
    let shapes: Vec<(usize, u64, u32)> = [2, 3, 4]
        .into_iter()
        .flat_map(|n| [(n, 2, 1), (n, 3, 1), (n, 2, 2)])
        .collect();
    let f5 = PrimeField::new(5).unwrap();
    let mut cache: HashMap<(usize, u64, u32), (Veronese, GroebnerBasis)> = HashMap::new();
    let mut steps = 0;
    for trial in 0..200 {
        let key = shapes[rng.gen_range(0..shapes.len())];
        let (v, gb) = match cache.entry(key) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                let v = ver(key.0, key.1, key.2)?;
                let ring = v.ring(f5);
                let gens: Vec<_> = quadratic_generators(&v, GeneratorStyle::Star)
                    .iter()
                    .map(|b| b.to_poly(&ring))
                    .collect();
                let gb = buchberger(&gens, MonomialOrder::DegRevLex).map_err(|e| e.to_string())?;
                e.insert((v, gb))
            }
        };
        let (v, gb) = (&*v, &*gb);
        let f = random_type_star(v, &mut rng);
        let target = f.to_int_poly(v).map_err(|e| e.to_string())?;
        let cert = rewrite(v, &f).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(cert.verifies(&target), || {
            format!("trial {trial}: expansion differs for {f:?}")
        })?;
        let red = gb
            .reduce(&target.to_poly(gb.ring()))
            .map_err(|e| e.to_string())?;
        ensure(red.is_zero(), || {
            format!("trial {trial}: nonzero remainder over F_5")
        })?;
        steps += cert.len();
    }
    Ok(format!("200 binomials, {steps} quadratic steps in total"))
}

fn gluing() -> Result<String, String> {
    let mut parts = Vec::new();
    for (n, p, h) in GLUING_PARAMS {
        let v = ver(n, p, h)?;
        let gens = SemigroupGens::of_veronese(&v);
        let tree = completely_p_glued(&gens, p, h, default_s_cap(h))
            .map_err(|e| format!("({n},{p},{h}): {e}"))?;
        tree.validate(p)
            .map_err(|e| format!("({n},{p},{h}): {e}"))?;
        let mut leaves = tree.generators();
        leaves.sort();
        let mut all = gens.generators().to_vec();
        all.sort();
        ensure(leaves == all, || {
            format!("({n},{p},{h}): tree does not cover T")
        })?;
        ensure(tree.depth() == v.codimension(), || {
            format!(
                "({n},{p},{h}): depth {} != N = {}",
                tree.depth(),
                v.codimension()
            )
        })?;
        let roundtrip: GluingTree = serde_json::from_str(&serde_json::to_string(&tree).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(roundtrip == tree, || {
            "JSON round trip changed the tree".into()
        })?;
        parts.push(format!("({n},{p},{h}) depth {}", tree.depth()));
    }
    Ok(parts.join(", "))
}

fn char_p_certificate() -> Result<String, String> {
    let mut parts = Vec::new();
    for (n, p, h) in GLUING_PARAMS {
        let v = ver(n, p, h)?;
        let cert = build_certificate(&v);
        ensure(cert.len() == v.codimension(), || {
            format!("({n},{p},{h}): {} binomials", cert.len())
        })?;
        let done = verify_char_p(&v, &cert, h + 1).map_err(|e| format!("({n},{p},{h}): {e}"))?;
        let kmax = done.witnesses.iter().map(|w| w.k).max().unwrap_or(0);
        parts.push(format!(
            "({n},{p},{h}) {} generators, max k {kmax}",
            done.witnesses.len()
        ));
    }
    Ok(parts.join(", "))
}

/// Zeros of `eqs` in F_r^dim by direct evaluation of integer polynomials.
fn brute_zeros(eqs: &[IntPoly], dim: usize, field: PrimeField) -> Vec<Vec<u64>> {
    let r = field.modulus();
    let total = r.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0u64; dim];
            for d in x.iter_mut().rev() {
                *d = idx % r;
                idx /= r;
            }
            x
        })
        .filter(|x| eqs.iter().all(|f| f.evaluate_mod(x, field) == 0))
        .collect()
}

fn char_p_points() -> Result<String, String> {
    let v = ver(3, 2, 1)?;
    let cert = build_certificate(&v);
    let rep = point_survey(
        &v,
        &cert,
        2,
        SurveyMode::FullEnumeration,
        DEFAULT_ENUMERATION_BUDGET,
    )
    .map_err(|e| e.to_string())?;
    let f2 = PrimeField::new(2).unwrap();
    let eqs: Vec<IntPoly> = cert.binomials.iter().map(Binomial::to_int_poly).collect();
    let zeros = brute_zeros(&eqs, v.len(), f2);
    let image: BTreeSet<Vec<u64>> = (0..8u64)
        .map(|m| v.parametrize(&[m >> 2 & 1, m >> 1 & 1, m & 1], f2))
        .collect();
    ensure(
        rep.count_cert == Some(8) && rep.count_image == 8 && rep.witness.is_none(),
        || format!("report {rep:?}"),
    )?;
    ensure(
        zeros.len() == 8 && zeros.iter().cloned().collect::<BTreeSet<_>>() == image,
        || format!("oracle found {} zeros", zeros.len()),
    )?;
    Ok("8 certificate zeros = 8 image points, no witness".into())
}

fn refutation() -> Result<String, String> {
    let v = ver(3, 2, 1)?;
    let cert = build_certificate(&v);
    let eqs: Vec<IntPoly> = cert.binomials.iter().map(Binomial::to_int_poly).collect();
    let full: Vec<IntPoly> = quadratic_generators(&v, GeneratorStyle::Full)
        .iter()
        .map(Binomial::to_int_poly)
        .collect();
    let mut parts = Vec::new();
    for r in [3, 5, 7] {
        let field = PrimeField::new(r).unwrap();
        let rep = point_survey(
            &v,
            &cert,
            r,
            SurveyMode::FullEnumeration,
            DEFAULT_ENUMERATION_BUDGET,
        )
        .map_err(|e| e.to_string())?;
        let w = rep
            .witness
            .clone()
            .ok_or_else(|| format!("no witness over F_{r}"))?;
        ensure(eqs.iter().all(|f| f.evaluate_mod(&w, field) == 0), || {
            format!("F_{r} witness {w:?} is not a certificate zero")
        })?;
        // V is cut out by its quadrics, so one nonvanishing quadric puts w off V.
        ensure(full.iter().any(|f| f.evaluate_mod(&w, field) != 0), || {
            format!("F_{r} witness {w:?} satisfies every quadric")
        })?;
        if r == 3 {
            ensure(w == [1, 1, 1, 1, 2, 1], || {
                format!("lex-first F_3 witness is {w:?}")
            })?;
        }
        parts.push(format!("F_{r} {w:?}"));
    }
    Ok(parts.join(", "))
}

fn full_ideal() -> Result<String, String> {
    let v = ver(3, 2, 1)?;
    let quadrics: Vec<IntPoly> = quadratic_generators(&v, GeneratorStyle::Full)
        .iter()
        .map(Binomial::to_int_poly)
        .collect();
    let mut parts = Vec::new();
    for r in [2, 3, 5] {
        let rep = full_ideal_point_survey(&v, r, DEFAULT_ENUMERATION_BUDGET)
            .map_err(|e| e.to_string())?;
        ensure(
            rep.count_cert == rep.count_v && rep.witness.is_none(),
            || {
                format!(
                    "F_{r}: {:?} zeros vs {:?} points of V",
                    rep.count_cert, rep.count_v
                )
            },
        )?;
        if r <= 3 {
            let zeros = brute_zeros(&quadrics, v.len(), PrimeField::new(r).unwrap()).len() as u64;
            ensure(Some(zeros) == rep.count_v, || {
                format!("F_{r}: oracle counts {zeros}")
            })?;
        }
        parts.push(format!("F_{r} {}", rep.count_v.unwrap()));
    }
    Ok(parts.join(", "))
}

fn jacobian() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED + 9);
    let mut parts = Vec::new();
    for ((n, p, h), r) in [((3, 2, 1), 5), ((3, 3, 1), 7)] {
        let v = ver(n, p, h)?;
        let field = PrimeField::new(r).unwrap();
        let b = quadratic_generators(&v, GeneratorStyle::Full);
        let origin = jacobian_rank(&v, &b, &vec![0; v.len()], r).map_err(|e| e.to_string())?;
        ensure(origin.rank == 0, || format!("origin rank {}", origin.rank))?;
        ensure(origin.triangular_submatrix_ok, || {
            "J' structure fails at the origin".into()
        })?;
        for _ in 0..50 {
            let u: Vec<u64> = loop {
                let u: Vec<u64> = (0..n).map(|_| rng.gen_range(0..r)).collect();
                if u.iter().any(|&x| x != 0) {
                    break u;
                }
            };
            let w = v.parametrize(&u, field);
            let rep = jacobian_rank(&v, &b, &w, r).map_err(|e| e.to_string())?;
            ensure(rep.rank == v.codimension(), || {
                format!("u = {u:?}: rank {}", rep.rank)
            })?;
            ensure(
                rep.triangular_submatrix_ok && rep.diagonal_value != 0,
                || format!("u = {u:?}: J' check failed"),
            )?;
        }
        parts.push(format!("({n},{p},{h})/F_{r} rank {}", v.codimension()));
    }
    Ok(parts.join(", "))
}

fn fibers() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(ACCEPTANCE_SEED + 10);
    let mut parts = Vec::new();
    for ((p, h), r) in [((2, 1), 5), ((3, 1), 7), ((2, 2), 5)] {
        let v = ver(3, p, h)?;
        let field = PrimeField::new(r).unwrap();
        let mut with_zero = 0;
        for k in 0..20 {
            let u: Vec<u64> = loop {
                let mut u: Vec<u64> = (0..3).map(|_| rng.gen_range(0..r)).collect();
                if k % 4 == 0 {
                    u[rng.gen_range(0..3)] = 0;
                }
                if u.iter().any(|&x| x != 0) {
                    break u;
                }
            };
            with_zero += u.contains(&0) as u32;
            let rep = fiber_check(&v, r, &u).map_err(|e| e.to_string())?;
            ensure(rep.orbit.len() == v.q() as usize, || {
                format!("orbit of {u:?} has {} points", rep.orbit.len())
            })?;
            for g in &rep.orbit {
                ensure(v.parametrize(g, field) == rep.base_point, || {
                    format!("orbit point {g:?} leaves the fiber")
                })?;
            }
            ensure(rep.equal, || {
                format!("q={} r={r} u={u:?}: fiber {:?}", v.q(), rep.fiber)
            })?;
        }
        parts.push(format!("q={} r={r} ({with_zero} with zeros)", v.q()));
    }
    Ok(parts.join(", "))
}

fn cohomology() -> Result<String, String> {
    let mut count = 0;
    for q in [2, 4, 8, 3, 9] {
        for act in admissible_actions(q).map_err(|e| e.to_string())? {
            let t = cohomology_orders(&act, DEFAULT_I_MAX);
            ensure(t.all_equal && t.nonvanishing, || {
                format!("q={q} a={}: {:?}", act.a(), t.orders)
            })?;
            let brute = brute_force_orders(&act, DEFAULT_I_MAX);
            ensure(t.orders.values().copied().eq(brute.iter().copied()), || {
                format!(
                    "q={q} a={}: formula {:?} vs enumeration {brute:?}",
                    act.a(),
                    t.orders
                )
            })?;
            ensure(act.a() % act.p() == 1 % act.p(), || {
                format!("q={q} a={}: a != 1 mod p", act.a())
            })?;
            let c = invariant_element(&act);
            ensure(!c.is_multiple_of(q), || "invariant class is zero".into())?;
            count += 1;
        }
    }
    Ok(format!("{count} admissible actions"))
}
