use dp6a2::density::{tau_infty_2d, tau_infty_3d, tau_infty_3d_symmetric};

#[test]
fn two_routes_agree() {
    let t = std::time::Instant::now();
    let a = tau_infty_3d(1e-7).unwrap();
    println!("3d {a} ({:?})", t.elapsed());
    let s = tau_infty_3d_symmetric(1e-7).unwrap();
    println!("3d symmetric {s} ({:?})", t.elapsed());
    let b = tau_infty_2d(1e-7).unwrap();
    println!("2d {b:?} ({:?})", t.elapsed());
    assert!((a - s).abs() < 1e-6 * a);
    assert!((a - b.value).abs() < 1e-3 * a, "{a} vs {}", b.value);
}
