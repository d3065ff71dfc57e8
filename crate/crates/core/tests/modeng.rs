use std::sync::Arc;

use weylforge_core::commalg::CofiniteIdeal;
use weylforge_core::hwdata::{standard_sequence, EvalPoint, Psi, Weight};
use weylforge_core::linalg::SparseVec;
use weylforge_core::modeng::*;
use weylforge_core::rootsys::Gcm;
use weylforge_core::Q;

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn alg(name: &str, b: &CofiniteIdeal) -> Arc<MapAlgebra> {
    map_algebra(&Gcm::named(name).unwrap(), b).unwrap()
}

fn psi_at(c: i64, lambda: &[i64], ideal: &CofiniteIdeal) -> Psi {
    Psi::single(vec![q(c)], Weight::new(lambda.to_vec()), ideal.clone())
}

fn dims_by_height(m: &dyn GradedModule) -> Vec<usize> {
    let mut out = vec![0; m.height_bound() as usize + 1];
    for r in m.dims() {
        out[r.height as usize] += r.dim;
    }
    out
}

fn unit_vec() -> SparseVec {
    vec![(0, Q::one())]
}

#[test]
fn sl2_verma_straightening() {
    let b = CofiniteIdeal::at(0, 1);
    let a = alg("A1", &b);
    for lambda in [0i64, 1, 2, 5] {
        let st = build_M(a.clone(), &psi_at(0, &[lambda], &b), None, 4, &BuildOptions::default()).unwrap();
        assert_eq!(dims_by_height(&st), vec![1; 5]);
        let e = a.gen(a.g.e(0), 0);
        let f = a.gen(a.g.f(0), 0);
        // e·f v = λ v
        let ActResult::Vector(eta, fv) = st.act(f, &[0], &unit_vec()).unwrap() else { panic!() };
        let got = st.act(e, &eta, &fv).unwrap();
        let want = if lambda == 0 { ActResult::Zero } else { ActResult::Vector(vec![0], vec![(0, q(lambda))]) };
        assert_eq!(got, want);
        // e·f²v = 2(λ−1) f v
        let ActResult::Vector(eta2, f2v) = st.act(f, &eta, &fv).unwrap() else { panic!() };
        let got = st.act(e, &eta2, &f2v).unwrap();
        let c = 2 * (lambda - 1);
        let want = if c == 0 { ActResult::Zero } else { ActResult::Vector(vec![1], vec![(0, q(c))]) };
        assert_eq!(got, want);
    }
}

#[test]
fn current_product_vanishes_in_truncated_coefficients() {
    let b = CofiniteIdeal::at(0, 2);
    let a = alg("A1", &b);
    let st = build_M(a.clone(), &psi_at(0, &[1], &b), None, 2, &BuildOptions::default()).unwrap();
    // basis of ℚ[t]/(t²) is 1, t
    let et = a.gen(a.g.e(0), 1);
    let ft = a.gen(a.g.f(0), 1);
    let ActResult::Vector(eta, w) = st.act(ft, &[0], &unit_vec()).unwrap() else { panic!() };
    assert_eq!(st.act(et, &eta, &w).unwrap(), ActResult::Zero);
}

#[test]
fn verma_singular_vector() {
    let b = CofiniteIdeal::at(0, 1);
    let a = alg("A1", &b);
    let st = build_M(a, &psi_at(0, &[2], &b), None, 4, &BuildOptions::default()).unwrap();
    for k in 0..=4u32 {
        let s = singular_vectors(&st, &[k]).unwrap();
        assert_eq!(s.len(), usize::from(k == 0 || k == 3), "k = {k}");
    }
}

#[test]
fn truncated_sl2_dims() {
    // λ = 2, I = (t), I_α = (t)², B = ℚ[t]/(t⁴): dim at λ − kα is k + 1
    let i = CofiniteIdeal::at(0, 1);
    let b = CofiniteIdeal::at(0, 4);
    let a = alg("A1", &b);
    let lam = Weight::new(vec![2]);
    let seq = standard_sequence(&lam, &i, a.g.table.clone()).unwrap();
    let st = build_M(a, &psi_at(0, &[2], &b), Some(&seq), 5, &BuildOptions::default()).unwrap();
    assert_eq!(dims_by_height(&st), vec![1, 2, 3, 4, 5, 6]);

    // λ = 0: the whole string dies
    let b1 = CofiniteIdeal::at(0, 1);
    let a1 = alg("A1", &b1);
    let lam0 = Weight::new(vec![0]);
    let seq0 = standard_sequence(&lam0, &i, a1.g.table.clone()).unwrap();
    let st0 = build_M(a1, &psi_at(0, &[0], &b1), Some(&seq0), 3, &BuildOptions::default()).unwrap();
    assert_eq!(dims_by_height(&st0), vec![1, 0, 0, 0]);
}

#[test]
fn weyl_modules_sl2() {
    let i = CofiniteIdeal::at(0, 1);
    let a = alg("A1", &i);
    let w = build_W(a, &psi_at(0, &[1], &i), &i, 4, &BuildOptions::default()).unwrap();
    assert_eq!(dims_by_height(&w), vec![1, 1, 0, 0, 0]);
    assert!(w.audit().unwrap().pass);

    let i2 = CofiniteIdeal::from_points(1, vec![(vec![q(0)], 1), (vec![q(1)], 1)]).unwrap();
    let a2 = alg("A1", &i2);
    let psi = Psi::new(
        vec![
            EvalPoint { point: vec![q(0)], weight: Weight::new(vec![1]) },
            EvalPoint { point: vec![q(1)], weight: Weight::new(vec![0]) },
        ],
        i2.clone(),
        1,
    );
    let w2 = build_W(a2, &psi, &i2, 4, &BuildOptions::default()).unwrap();
    assert_eq!(w2.total_dim(), 2);
}

#[test]
fn weyl_module_two_points_total_four() {
    // B must refine I^{N_{λ,α}} = I², so B = A/I² rather than A/I
    let i = CofiniteIdeal::from_points(1, vec![(vec![q(0)], 1), (vec![q(1)], 1)]).unwrap();
    let a = alg("A1", &i.power(2).unwrap());
    let psi = Psi::new(
        vec![
            EvalPoint { point: vec![q(0)], weight: Weight::new(vec![1]) },
            EvalPoint { point: vec![q(1)], weight: Weight::new(vec![1]) },
        ],
        i.clone(),
        1,
    );
    let w = build_W(a, &psi, &i, 4, &BuildOptions::default()).unwrap();
    assert_eq!(dims_by_height(&w), vec![1, 2, 1, 0, 0]);
}

#[test]
fn weyl_module_nonradical_is_recorded() {
    let i = CofiniteIdeal::at(0, 1);
    let b = CofiniteIdeal::at(0, 2);
    let a = alg("A1", &b);
    let w = build_W(a, &psi_at(0, &[2], &b), &i, 4, &BuildOptions::default()).unwrap();
    assert_eq!(dims_by_height(&w), vec![1, 2, 1, 0, 0]);
}

#[test]
fn evaluation_module_two_points() {
    let gcm = Gcm::named("A1").unwrap();
    let m0 = CofiniteIdeal::at(0, 1);
    let m1 = CofiniteIdeal::at(1, 1);
    let psi = Psi::new(
        vec![
            EvalPoint { point: vec![q(0)], weight: Weight::new(vec![1]) },
            EvalPoint { point: vec![q(1)], weight: Weight::new(vec![1]) },
        ],
        m0.intersect(&m1).unwrap(),
        1,
    );
    let ev = evaluation_module(&gcm, &psi, 3).unwrap();
    assert_eq!(ev.total_dim(), 4);
    assert_eq!(dims_by_height(ev.as_ref()), vec![1, 2, 1, 0]);
    let a = ev.algebra().clone();
    // (f⊗t)(v⊗v) = v⊗fv
    let t = a.b.coords(&weylforge_core::poly::Poly::parse("t", 1).unwrap()).unwrap();
    let ft = a.element(a.g.f(0), &t);
    let ActResult::Vector(eta, w) = act_element(ev.as_ref(), &ft, &[0], &unit_vec()).unwrap() else { panic!() };
    assert_eq!(eta, vec![1]);
    assert_eq!(w.len(), 1);
    assert_eq!(w[0].1, Q::one());

    let audit = weyl_relation_audit(ev.as_ref(), &psi, &psi.annihilating_ideal).unwrap();
    assert!(audit.pass, "{audit:?}");
    let cyc = cyclic_span(ev.as_ref()).unwrap();
    assert!(cyc.pass);
    for k in 0..=2u32 {
        let s = singular_vectors(ev.as_ref(), &[k]).unwrap();
        assert_eq!(s.len(), usize::from(k == 0));
    }
    assert!(matches!(
        evaluation_module(
            &gcm,
            &Psi::new(
                vec![
                    EvalPoint { point: vec![q(0)], weight: Weight::new(vec![1]) },
                    EvalPoint { point: vec![q(0)], weight: Weight::new(vec![1]) },
                ],
                m0.clone(),
                1
            ),
            3
        ),
        Err(ModError::DuplicatePoint(_))
    ));
}

#[test]
fn a2_weyl_adjoint() {
    let i = CofiniteIdeal::at(0, 1);
    let a = alg("A2", &CofiniteIdeal::at(0, 2));
    let w = build_W(a, &psi_at(0, &[1, 1], &i), &i, 5, &BuildOptions::default()).unwrap();
    // local Weyl module at θ: the adjoint representation plus a trivial summand
    assert_eq!(w.total_dim(), 9);
}
