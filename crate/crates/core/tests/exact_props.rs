use contextlab_core::exact::{inner_product, parse_rays, same_atom, write_rays, Ray};
use contextlab_core::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != Rational::from_integer(BigInt::from(0)))
}

fn ray(dim: usize) -> impl Strategy<Value = Ray> {
    proptest::collection::vec(rational(), dim).prop_filter_map("nonzero ray", |coords| Ray::new("r", coords).ok())
}

fn triple() -> impl Strategy<Value = (Ray, Ray, Ray)> {
    (2usize..6).prop_flat_map(|d| (ray(d), ray(d), ray(d)))
}

/// Same line through the origin, by cross-multiplication of all coordinate pairs.
fn collinear(a: &Ray, b: &Ray) -> bool {
    let (x, y) = (a.coords(), b.coords());
    (0..x.len()).all(|i| (0..x.len()).all(|j| &x[i] * &y[j] == &x[j] * &y[i]))
}

proptest! {
    #[test]
    fn inner_product_symmetric((a, b, _) in triple()) {
        prop_assert_eq!(inner_product(&a, &b).unwrap(), inner_product(&b, &a).unwrap());
    }

    #[test]
    fn inner_product_scales((a, b, _) in triple(), l in nonzero_rational()) {
        let scaled = a.scaled(&l).unwrap();
        prop_assert_eq!(inner_product(&scaled, &b).unwrap(), l * inner_product(&a, &b).unwrap());
    }

    #[test]
    fn inner_product_additive((a, b, c) in triple()) {
        let sum: Vec<Rational> = a.coords().iter().zip(c.coords()).map(|(x, y)| x + y).collect();
        if let Ok(s) = Ray::new("s", sum) {
            prop_assert_eq!(
                inner_product(&s, &b).unwrap(),
                inner_product(&a, &b).unwrap() + inner_product(&c, &b).unwrap()
            );
        }
    }

    #[test]
    fn same_atom_is_equivalence((a, b, c) in triple(), l in nonzero_rational(), m in nonzero_rational()) {
        prop_assert!(same_atom(&a, &a).unwrap());
        prop_assert_eq!(same_atom(&a, &b).unwrap(), same_atom(&b, &a).unwrap());
        // Force a chain a ~ a·l ~ a·l·m to exercise transitivity.
        let al = a.scaled(&l).unwrap();
        let alm = al.scaled(&m).unwrap();
        prop_assert!(same_atom(&a, &al).unwrap() && same_atom(&al, &alm).unwrap());
        prop_assert!(same_atom(&a, &alm).unwrap());
        if same_atom(&a, &b).unwrap() && same_atom(&b, &c).unwrap() {
            prop_assert!(same_atom(&a, &c).unwrap());
        }
        prop_assert_eq!(same_atom(&a, &b).unwrap(), collinear(&a, &b));
    }

    #[test]
    fn canonical_key_ignores_scale((a, _, _) in triple(), l in nonzero_rational()) {
        prop_assert_eq!(a.canonical_key(), a.scaled(&l).unwrap().canonical_key());
    }

    #[test]
    fn normalize_float_ignores_scale((a, _, _) in triple(), l in nonzero_rational()) {
        let x = a.normalize_float::<f64>();
        let y = a.scaled(&l).unwrap().normalize_float::<f64>();
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-12);
        }
        let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ray_text_roundtrip(rays in proptest::collection::vec(ray(4), 1..6)) {
        let labelled: Vec<Ray> = rays.iter().enumerate().map(|(i, r)| r.with_label(format!("R{i}"))).collect();
        let text = write_rays(&labelled);
        prop_assert_eq!(parse_rays(&text).unwrap(), labelled);
    }
}
