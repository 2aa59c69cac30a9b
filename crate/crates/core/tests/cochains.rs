use std::sync::Arc;

use operadix::algebra::{evaluate_tree, sample_algebra, AlgebraElement, NAryAlgebra, SampleKind};
use operadix::cochain::{
    cup, defect_probes, evaluate_cochain, evaluate_in_context, nested_symbolic_eval, pa_defect_numeric,
    theorem_check_symbolic, ContextMonomial, CupExpression, DecomposableCochain, Endomorphism,
};
use operadix::{Field, GeneratorSpec, PlanarTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rational;

fn star(n: usize) -> GeneratorSpec {
    GeneratorSpec::new("mu", n, 0).unwrap().dual()
}

fn rect22() -> Arc<NAryAlgebra> {
    Arc::new(sample_algebra(SampleKind::RectMatrices { p: 2, q: 2 }, Q).unwrap())
}

fn random_maps(a: &NAryAlgebra, k: usize, rng: &mut ChaCha8Rng) -> Vec<Endomorphism> {
    (0..k).map(|_| Endomorphism::random(a.field(), a.dim(), rng)).collect()
}

fn random_args(a: &NAryAlgebra, k: usize, rng: &mut ChaCha8Rng) -> Vec<AlgebraElement> {
    (0..k).map(|_| AlgebraElement::random(a.field(), a.dim(), rng)).collect()
}

fn degree_zero(a: &Arc<NAryAlgebra>, f: &Endomorphism) -> DecomposableCochain {
    DecomposableCochain::new(a.clone(), 0, vec![f.clone()]).unwrap()
}

fn mu(a: &NAryAlgebra, xs: &[AlgebraElement]) -> AlgebraElement {
    a.mu(xs).unwrap()
}

#[test]
fn ternary_cup_on_the_generator() {
    let a = rect22();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let maps = random_maps(&a, 3, &mut rng);
    let c = cup(&maps.iter().map(|f| degree_zero(&a, f)).collect::<Vec<_>>()).unwrap();
    assert_eq!(c.degree(), 1);
    let x = random_args(&a, 3, &mut rng);
    let got = evaluate_cochain(&c, &PlanarTree::corolla(3).unwrap(), &x).unwrap();
    let expected = mu(&a, &[maps[0].apply(&x[0]), maps[1].apply(&x[1]), maps[2].apply(&x[2])]);
    assert_eq!(got, expected);

    let id = Endomorphism::identity(Q, a.dim());
    let c = cup(&[degree_zero(&a, &id), degree_zero(&a, &id), degree_zero(&a, &id)]).unwrap();
    assert_eq!(evaluate_cochain(&c, &PlanarTree::corolla(3).unwrap(), &x).unwrap(), mu(&a, &x));
}

#[test]
fn degree_two_ternary_cochain_on_m2() {
    let a = rect22();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_maps(&a, 5, &mut rng);
    let c = DecomposableCochain::new(a.clone(), 2, f.clone()).unwrap();
    let x = random_args(&a, 5, &mut rng);
    let got = evaluate_cochain(&c, &PlanarTree::weight_two(3, 2).unwrap(), &x).unwrap();
    let inner = mu(&a, &[f[1].apply(&x[1]), f[2].apply(&x[2]), f[3].apply(&x[3])]);
    assert_eq!(got, mu(&a, &[f[0].apply(&x[0]), inner, f[4].apply(&x[4])]));
}

#[test]
fn identity_components_evaluate_the_tree() {
    let a = rect22();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let id = Endomorphism::identity(Q, a.dim());
    for t in operadix::enumerate_trees(3, 2).unwrap() {
        let c = DecomposableCochain::new(a.clone(), 2, vec![id.clone(); 5]).unwrap();
        let x = random_args(&a, 5, &mut rng);
        assert_eq!(evaluate_cochain(&c, &t, &x).unwrap(), evaluate_tree(&a, &t, &x).unwrap());
    }
}

#[test]
fn total_associativity_makes_evaluation_shape_blind() {
    let a = rect22();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = DecomposableCochain::random(a.clone(), 3, &mut rng);
    let x = random_args(&a, 7, &mut rng);
    let values: Vec<_> =
        operadix::enumerate_trees(3, 3).unwrap().iter().map(|t| evaluate_cochain(&c, t, &x).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn quaternary_replication_matches_worked_examples() {
    let a = Arc::new(sample_algebra(SampleKind::Diagonal { n: 4, dim: 2 }, Q).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let maps = random_maps(&a, 7, &mut rng);
    let (f, g, h, k, l, u, v) = (&maps[0], &maps[1], &maps[2], &maps[3], &maps[4], &maps[5], &maps[6]);
    let factors: Vec<_> = [f, g, h, k].iter().map(|m| degree_zero(&a, m)).collect();
    let c = cup(&factors).unwrap();
    let x = random_args(&a, 7, &mut rng);
    // <f,g,h,k>(m1) = mu(mu(f a1, f a2, f a3, f a4), g a5, h a6, k a7)
    let inner = mu(&a, &[f.apply(&x[0]), f.apply(&x[1]), f.apply(&x[2]), f.apply(&x[3])]);
    let expected = mu(&a, &[inner, g.apply(&x[4]), h.apply(&x[5]), k.apply(&x[6])]);
    assert_eq!(evaluate_cochain(&c, &PlanarTree::weight_two(4, 1).unwrap(), &x).unwrap(), expected);

    // <<f,g,h,k>,l,u,v> on (m1 o1 mu*) o9 mu* uses f four times and u four times.
    let outer = cup(&[c, degree_zero(&a, l), degree_zero(&a, u), degree_zero(&a, v)]).unwrap();
    assert_eq!((outer.degree(), outer.base_weight()), (4, 2));
    let beta = ContextMonomial::new(star(4), 1, vec![1, 9]).unwrap();
    let y = random_args(&a, 13, &mut rng);
    let comps: Vec<&Endomorphism> = [f, f, f, f, g, h, k, l, u, u, u, u, v].to_vec();
    let inputs: Vec<_> = comps.iter().zip(&y).map(|(m, arg)| m.apply(arg)).collect();
    let expected = evaluate_tree(&a, &beta.tree(), &inputs).unwrap();
    assert_eq!(evaluate_in_context(&outer, &beta, &y).unwrap(), expected);
    assert_eq!(evaluate_cochain(&outer, &beta.tree(), &y).unwrap(), expected);
}

#[test]
fn cup_degree_law() {
    let a3 = rect22();
    let a4 = Arc::new(sample_algebra(SampleKind::Diagonal { n: 4, dim: 2 }, Q).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (a, n) in [(a3, 3usize), (a4, 4usize)] {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            tuples = tuples.into_iter().flat_map(|t| (0..=3).map(move |k| [t.clone(), vec![k]].concat())).collect();
        }
        for t in tuples.into_iter().filter(|t| t.iter().sum::<usize>() <= 3) {
            let factors: Vec<_> = t.iter().map(|&k| DecomposableCochain::random(a.clone(), k, &mut rng)).collect();
            let c = cup(&factors).unwrap();
            assert_eq!(c.degree(), t.iter().sum::<usize>() + n - 2);
        }
    }
}

#[test]
fn reassociation_keeps_values() {
    let a = rect22();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let degrees = [1, 0, 2, 0, 1];
    let cochains: Vec<_> = degrees.iter().map(|&k| DecomposableCochain::random(a.clone(), k, &mut rng)).collect();
    let results: Vec<_> =
        (1..=3).map(|p| CupExpression::nested_at(3, p, cochains.clone()).unwrap().evaluate().unwrap()).collect();
    let w = results[0].degree();
    let x = random_args(&a, 1 + 2 * w, &mut rng);
    for t in operadix::enumerate_trees(3, w).unwrap().iter().take(20) {
        let v: Vec<_> = results.iter().map(|c| evaluate_cochain(c, t, &x).unwrap()).collect();
        assert!(v.windows(2).all(|p| p[0] == p[1]));
    }
}

#[test]
fn cup_is_multilinear_in_components() {
    let a = rect22();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = random_maps(&a, 3, &mut rng);
    let s = Q.from_i64(-3);
    let base: Vec<_> = f.iter().map(|m| degree_zero(&a, m)).collect();
    let mut scaled = base.clone();
    scaled[1] = degree_zero(&a, &f[1].scale(&s));
    let x = random_args(&a, 3, &mut rng);
    let t = PlanarTree::corolla(3).unwrap();
    let lhs = evaluate_cochain(&cup(&scaled).unwrap(), &t, &x).unwrap();
    let rhs = evaluate_cochain(&cup(&base).unwrap(), &t, &x).unwrap().scale(&s);
    assert_eq!(lhs, rhs);
}

#[test]
fn cup_rejects_mismatches() {
    let a = rect22();
    let b = Arc::new(sample_algebra(SampleKind::OddPoly { n: 3, truncation: 5 }, Q).unwrap());
    let id4 = Endomorphism::identity(Q, 4);
    let id2 = Endomorphism::identity(Q, 2);
    assert!(cup(&[degree_zero(&a, &id4), degree_zero(&a, &id4)]).is_err());
    assert!(cup(&[degree_zero(&a, &id4), degree_zero(&a, &id4), degree_zero(&b, &id2)]).is_err());
    assert!(DecomposableCochain::new(a.clone(), 1, vec![id4.clone(); 2]).is_err());
    let c = DecomposableCochain::new(a, 1, vec![id4; 3]).unwrap();
    assert!(evaluate_cochain(&c, &PlanarTree::weight_two(3, 1).unwrap(), &[]).is_err());
}

#[test]
fn nested_symbolic_eval_examples() {
    let m1 = ContextMonomial::new(star(3), 1, vec![]).unwrap();
    let e = CupExpression::nested_at(3, 2, vec!['f', 'g', 'h', 'k', 'l']).unwrap();
    assert_eq!(nested_symbolic_eval(&e, &m1).unwrap().to_string(), "m2");
    let e1 = CupExpression::nested_at(3, 1, vec!['f', 'g', 'h', 'k', 'l']).unwrap();
    let beta = ContextMonomial::new(star(3), 1, vec![2, 7]).unwrap();
    assert_eq!(nested_symbolic_eval(&e1, &beta).unwrap(), beta);
    let beta4 = ContextMonomial::new(star(4), 1, vec![1, 9]).unwrap();
    let e4 = CupExpression::nested_at(4, 4, vec!['f', 'g', 'h', 'k', 'l', 'u', 'v']).unwrap();
    assert_eq!(nested_symbolic_eval(&e4, &beta4).unwrap().to_string(), "((m4 o1 mu*) o9 mu*)");
    let deep = CupExpression::Cup(vec![
        CupExpression::Cup(vec![CupExpression::Cup(vec![CupExpression::Leaf(0); 3]), CupExpression::Leaf(0), CupExpression::Leaf(0)]),
        CupExpression::Leaf(0),
        CupExpression::Leaf(0),
    ]);
    assert!(nested_symbolic_eval(&deep, &m1).is_err());
}

#[test]
fn symbolic_check_certificates() {
    let c = theorem_check_symbolic(3, &[0; 5], 5, Q).unwrap();
    let betas: Vec<&str> = c.monomials.iter().map(|m| m.beta.as_str()).collect();
    assert_eq!(betas, ["m1", "m2"]);
    assert!(c.monomials.iter().all(|m| m.ok && m.reduced_row.iter().all(|x| x == "0")));
    let c4 = theorem_check_symbolic(4, &[0; 7], 4, Q).unwrap();
    assert!(c4.ok);
    assert!(c4.monomials.iter().any(|m| m.beta == "((m1 o1 mu*) o9 mu*)"));
    // Over a prime field the check runs in the same way.
    assert!(theorem_check_symbolic(3, &[1, 0, 0, 0, 0], 5, Field::prime(3).unwrap()).unwrap().ok);
}

#[test]
fn numeric_defects() {
    let gf3 = Field::prime(3).unwrap();
    let a4 = Arc::new(sample_algebra(SampleKind::Diagonal { n: 4, dim: 2 }, Q).unwrap());
    let r = defect_probes(&a4, &[0; 7], 30, 11).unwrap();
    assert!(r.ok && r.zero == 30);
    let a3 = Arc::new(sample_algebra(SampleKind::RectMatrices { p: 2, q: 2 }, Q).unwrap());
    let r = defect_probes(&a3, &[0; 5], 30, 12).unwrap();
    assert!(r.ok);
    assert!(r.zero < 30, "rational probes should see nonzero common values");
    let a3p = Arc::new(sample_algebra(SampleKind::RectMatrices { p: 2, q: 2 }, gf3).unwrap());
    let r = defect_probes(&a3p, &[0; 5], 30, 13).unwrap();
    assert!(r.ok && r.zero == 30);

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let cochains: Vec<_> = (0..5).map(|_| DecomposableCochain::random(a3.clone(), 0, &mut rng)).collect();
    let beta = ContextMonomial::new(star(3), 2, vec![]).unwrap();
    let x = random_args(&a3, 5, &mut rng);
    let d = pa_defect_numeric(3, &cochains, &beta, &x).unwrap();
    let common = evaluate_in_context(&cup(&[cup(&cochains[..3]).unwrap(), cochains[3].clone(), cochains[4].clone()]).unwrap(), &beta, &x).unwrap();
    assert_eq!(d, common.scale(&Q.from_i64(3)));
    assert!(pa_defect_numeric(4, &cochains, &beta, &x).is_err());
}
