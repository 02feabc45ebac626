use num_bigint::BigInt;
use num_traits::{One, Signed};
use toricq::exact::{rat, Rat};
use toricq::polytope::DelzantFailure;
use toricq::quantize::{localization_report, quantize, reduce, riemann_roch, verify_qr};
use toricq::{complete_to_basis, hermite_normal_form, parse_polytope, FormalCharacter, IntMatrix, LatticeBox, Polyhedron, Weight};

fn w(c: &[i64]) -> Weight {
    Weight(c.to_vec())
}

fn pts(p: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut v = p.to_vec();
    v.sort();
    v
}

fn square() -> Polyhedron {
    Polyhedron::cube(2, 2).unwrap()
}

fn simplex() -> Polyhedron {
    Polyhedron::standard_simplex(2, 2).unwrap()
}

fn quadrant() -> Polyhedron {
    Polyhedron::orthant(2).unwrap()
}

fn segment(k: i64) -> Polyhedron {
    Polyhedron::from_inequalities(&[(vec![1], 0), (vec![-1], -k)]).unwrap()
}

#[test]
fn lattice_examples() {
    assert_eq!(w(&[2, 4]).primitive().unwrap(), w(&[1, 2]));
    assert_eq!(w(&[-3, 6]).primitive().unwrap(), w(&[-1, 2]));
    assert!(w(&[0, 0]).primitive().is_err());

    let id = IntMatrix::identity(2);
    let (h, u) = hermite_normal_form(&id).unwrap();
    assert_eq!((h, u.matrix().clone()), (id.clone(), id.clone()));
    let (h, u) = hermite_normal_form(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])).unwrap();
    assert_eq!(h, id);
    assert!(u.matrix().column(0).iter().chain(u.matrix().column(1).iter()).all(|c| c.abs() <= BigInt::one()));
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 1]]);
    let (h, u) = hermite_normal_form(&a).unwrap();
    assert_eq!(a.mul(u.matrix()), h);
    assert!(u.det().abs().is_one());

    assert_eq!(complete_to_basis(&w(&[1, 0])).unwrap().matrix(), &id);
    assert_eq!(complete_to_basis(&w(&[0, 1])).unwrap().matrix(), &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
    let u = complete_to_basis(&w(&[2, 3])).unwrap();
    assert_eq!(u.matrix().column(0), vec![BigInt::from(2), BigInt::from(3)]);
    assert!(u.det().abs().is_one());
}

#[test]
fn polytope_examples() {
    let text = "name = \"square\"\ndim = 2\n[[facets]]\nnormal = [1, 0]\noffset = 0\n[[facets]]\nnormal = [0, 1]\noffset = 0\n[[facets]]\nnormal = [-1, 0]\noffset = -2\n[[facets]]\nnormal = [0, -1]\noffset = -2\n";
    assert_eq!(parse_polytope(text).unwrap().facets().len(), 4);
    let scaled = parse_polytope("dim = 2\n[[facets]]\nnormal = [2, 4]\noffset = 3\n").unwrap();
    let f = &scaled.facets()[0];
    assert_eq!(f.normal(), &[BigInt::from(1), BigInt::from(2)]);
    assert_eq!(f.offset(), &Rat::new(BigInt::from(3), BigInt::from(2)));
    let zero = parse_polytope("dim = 2\n[[facets]]\nnormal = [1, 0]\noffset = 0\n[[facets]]\nnormal = [0, 0]\noffset = 0\n");
    assert!(zero.unwrap_err().to_string().contains("facets[1]"));

    assert!(square().contains(&[rat(1), rat(1)]).unwrap());
    assert!(!square().contains(&[rat(3), rat(0)]).unwrap());
    assert!(quadrant().contains(&[rat(5), rat(7)]).unwrap());

    let v = |p: Polyhedron| pts(&p.vertices().unwrap().into_iter().map(|f| f.point).collect::<Vec<_>>());
    let r = |c: &[i64]| c.iter().map(|&x| rat(x)).collect::<Vec<_>>();
    assert_eq!(v(square()), pts(&[r(&[0, 0]), r(&[0, 2]), r(&[2, 0]), r(&[2, 2])]));
    assert_eq!(v(simplex()), pts(&[r(&[0, 0]), r(&[2, 0]), r(&[0, 2])]));
    assert_eq!(v(quadrant()), vec![r(&[0, 0])]);

    assert!(square().is_bounded());
    assert!(!quadrant().is_bounded());
    assert!(!Polyhedron::slab(2, 0, 1).unwrap().is_bounded());

    assert!(square().delzant_check().unwrap().is_delzant);
    assert!(simplex().delzant_check().unwrap().is_delzant);
    let cone = Polyhedron::from_inequalities(&[(vec![1, 0], 0), (vec![1, 2], 0)]).unwrap();
    let report = cone.delzant_check().unwrap();
    assert!(!report.is_delzant);
    assert!(report.violations.iter().any(|v| matches!(&v.failure, DelzantFailure::Determinant(d) if d.abs() == BigInt::from(2))));

    assert_eq!(square().lattice_points(None).unwrap().len(), 9);
    assert_eq!(simplex().lattice_points(None).unwrap().len(), 6);
    assert_eq!(quadrant().lattice_points(Some(&LatticeBox::cube(2, 0, 1))).unwrap().len(), 4);

    let s = square().slice(&w(&[1, 0]), 1).unwrap();
    assert_eq!((s.dim(), s.lattice_points(None).unwrap()), (1, vec![w(&[0]), w(&[1]), w(&[2])]));
    let t = simplex().slice(&w(&[1, 0]), 1).unwrap();
    assert_eq!(t.lattice_points(None).unwrap(), vec![w(&[0]), w(&[1])]);
    assert!(square().slice(&w(&[1, 0]), 5).unwrap().is_empty().unwrap());
}

#[test]
fn character_examples() {
    let d = FormalCharacter::delta;
    assert_eq!(d(&w(&[0])).evaluate(&w(&[0])).unwrap(), 1);
    assert_eq!(d(&w(&[2])).evaluate(&w(&[3])).unwrap(), 0);
    assert_eq!(d(&w(&[1, -1])).evaluate(&w(&[1, -1])).unwrap(), 1);

    assert_eq!(d(&w(&[2])).add(&d(&w(&[2]))).unwrap().evaluate(&w(&[2])).unwrap(), 2);
    assert_eq!(d(&w(&[1])).add(&d(&w(&[1])).scale(-1)).unwrap().finite_terms().unwrap().len(), 0);
    let sq = FormalCharacter::indicator(square());
    assert_eq!(sq.add(&d(&w(&[1, 1]))).unwrap().evaluate(&w(&[1, 1])).unwrap(), 2);

    let five = d(&w(&[2])).tensor(&d(&w(&[3]))).unwrap();
    assert_eq!(five.finite_terms().unwrap(), d(&w(&[5])).finite_terms().unwrap());
    assert!(d(&w(&[0, 0])).tensor(&sq).unwrap().equal_on_probes(&sq).unwrap());
    let outer = d(&w(&[1])).outer(&d(&w(&[2]))).unwrap();
    assert_eq!(outer.rank(), 2);
    assert_eq!(outer.finite_terms().unwrap(), d(&w(&[1, 2])).finite_terms().unwrap());

    assert_eq!(sq.evaluate(&w(&[1, 1])).unwrap(), 1);
    assert_eq!(sq.evaluate(&w(&[3, 3])).unwrap(), 0);
    let q = FormalCharacter::indicator(quadrant()).sub(&d(&w(&[0, 0]))).unwrap();
    assert_eq!(q.evaluate(&w(&[0, 0])).unwrap(), 0);

    let r = sq.restrict(&w(&[1, 0])).unwrap();
    assert_eq!(r.evaluate(&w(&[1])).unwrap(), 3);
    assert_eq!(r.evaluate(&w(&[5])).unwrap(), 0);
    let rq = FormalCharacter::indicator(quadrant()).restrict(&w(&[1, 1])).unwrap();
    assert_eq!(rq.evaluate(&w(&[2])).unwrap(), 3);
    let err = FormalCharacter::indicator(quadrant()).restrict(&w(&[1, -1])).unwrap_err();
    assert!(err.to_string().contains("unbounded"));
}

#[test]
fn quantize_examples() {
    let q = quantize(&square()).unwrap();
    assert_eq!(q.evaluate(&w(&[2, 2])).unwrap(), 1);
    assert_eq!(square().lattice_points(None).unwrap().iter().filter(|p| q.evaluate(p).unwrap() == 1).count(), 9);
    let qq = quantize(&quadrant()).unwrap();
    assert_eq!((qq.evaluate(&w(&[10, 10])).unwrap(), qq.evaluate(&w(&[-1, 0])).unwrap()), (1, 0));
    let seg = quantize(&segment(3)).unwrap();
    assert_eq!((-2..=6).filter(|&x| seg.evaluate(&w(&[x])).unwrap() == 1).count(), 4);

    assert_eq!(riemann_roch(&segment(2)).unwrap(), 3);
    assert_eq!(riemann_roch(&Polyhedron::point(&w(&[4, -1])).unwrap()).unwrap(), 1);
    assert_eq!(riemann_roch(&square()).unwrap(), 9);

    assert_eq!(reduce(&square(), &w(&[1, 0]), 1).unwrap().lattice_points(None).unwrap().len(), 3);
    assert_eq!(reduce(&simplex(), &w(&[0, 1]), 1).unwrap().lattice_points(None).unwrap(), vec![w(&[0]), w(&[1])]);
    assert!(reduce(&square(), &w(&[1, 0]), 0).is_err());

    let r = verify_qr(&square(), &w(&[1, 0]), 1).unwrap();
    assert_eq!((r.lhs, r.rhs, r.regular, r.pass), (3, 3, true, true));
    let r = verify_qr(&simplex(), &w(&[1, 1]), 1).unwrap();
    assert_eq!((r.lhs, r.rhs, r.pass), (2, 2, true));
    let r = verify_qr(&square(), &w(&[1, 0]), 0).unwrap();
    assert_eq!((r.regular, r.pass), (false, false));

    let l = localization_report(&square(), &w(&[1, 1])).unwrap();
    assert_eq!((l.fiber_contribution, l.total()), (1, 1));
    assert!(l.boundary_terms.iter().all(|b| b.contribution == 0));
    assert_eq!(localization_report(&square(), &w(&[5, 5])).unwrap().total(), 0);
    let l = localization_report(&quadrant(), &w(&[0, 0])).unwrap();
    assert_eq!((l.fiber_contribution, l.total()), (1, 1));
}
