use cuspdim_core::fincke::*;
use cuspdim_core::testfn::*;
use num_rational::BigRational;
use std::time::Instant;

fn main() {
    // Criterion 3 counts: 158 / 265 / 1260.
    let t0 = Instant::now();
    let q = EnumerationQuery {
        wmax: 22,
        spec: TestFunctionSpec::new(TestFamily::F, BigRational::new(219.into(), 50.into())),
        bound: Bound::Ratio(1),
        filters: Filters { contains: Some(22), det_one: true, ..Default::default() },
        prec: 128,
    };
    let e = enumerate_effective(&q).unwrap();
    println!("158-case: {} elements, {} borderline, {:?}", e.elements.len(), e.borderline.len(), t0.elapsed());

    let t0 = Instant::now();
    let q = EnumerationQuery {
        wmax: 23,
        spec: TestFunctionSpec::new(TestFamily::F, BigRational::new(487.into(), 50.into())),
        bound: Bound::Ratio(2),
        filters: Filters { contains: Some(23), ..Default::default() },
        prec: 128,
    };
    let e = enumerate_effective(&q).unwrap();
    println!("265-case: {} elements, {} borderline, {:?}", e.elements.len(), e.borderline.len(), t0.elapsed());

    let t0 = Instant::now();
    let q = EnumerationQuery {
        wmax: 24,
        spec: TestFunctionSpec::new(TestFamily::F, BigRational::new(487.into(), 50.into())),
        bound: Bound::None,
        filters: Filters { contains: Some(24), det_one: true, eps_one: true, multiplicity_free: true, min_dim_exclusive: Some(12) },
        prec: 128,
    };
    let e = enumerate_effective(&q).unwrap();
    println!("1260-case: {} elements, {} borderline, {:?}", e.elements.len(), e.borderline.len(), t0.elapsed());
}
