use proptest::prelude::*;
use soliton_spectra::config::{Command, RunConfig};
use soliton_spectra::grid::{Grid1D, Scheme};
use soliton_spectra::io::fmt_num;
use soliton_spectra::nonlinearity::NonlinearityModel;
use soliton_spectra::operators::jl_pair;
use soliton_spectra::profiles::{solve_nls_profile, SolverOptions};
use soliton_spectra::spectra::hamiltonian_spectrum;
use soliton_spectra::stability::{linspace, VkVerdict};
use soliton_spectra::symmetry::SectorBasis;

fn apply(a: &faer::Mat<f64>, x: &[f64]) -> Vec<f64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum()).collect()
}

fn coefficients() -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(-2.0..2.0f64, 1..5), 0.5..2.0f64).prop_map(|(mut c, m)| {
        c.insert(0, m);
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn big_g_differentiates_to_g(c in coefficients(), s in 0.05..1.5f64) {
        let model = NonlinearityModel::polynomial(c).unwrap();
        let h = 1e-5;
        let fd = (model.big_g(s + h) - model.big_g(s - h)) / (2.0 * h);
        prop_assert!((fd - model.g(s)).abs() <= 1e-7 * (1.0 + model.g(s).abs()));
        let fdg = (model.g(s + h) - model.g(s - h)) / (2.0 * h);
        prop_assert!((fdg - model.g_prime(s)).abs() <= 1e-6 * (1.0 + model.g_prime(s).abs()));
        let fdk = (model.k(s + h).unwrap() - model.k(s - h).unwrap()) / (2.0 * h);
        prop_assert!((fdk - s * model.g_prime(s)).abs() <= 1e-6 * (1.0 + s * model.g_prime(s).abs()));
        prop_assert_eq!(model.big_g(0.0), 0.0);
    }

    #[test]
    fn soler_power_matches_polynomial(k in 1u32..5, m in 0.5..2.0f64, s in 0.0..1.5f64) {
        let a = NonlinearityModel::soler_power(k, m).unwrap();
        let mut c = vec![0.0; k as usize + 1];
        c[0] = m;
        c[k as usize] = -1.0;
        let b = NonlinearityModel::polynomial(c).unwrap();
        prop_assert!((a.g(s) - b.g(s)).abs() < 1e-12);
        prop_assert!((a.big_g(s) - b.big_g(s)).abs() < 1e-12);
        prop_assert!((a.k(s).unwrap() - b.k(s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn derivative_matrices(half in 1usize..40, l in 2.0..40.0f64, mode in 1usize..6, fd in any::<bool>()) {
        let n = 2 * half + 8;
        let scheme = if fd { Scheme::Fd2Wilson { r: 1.0 } } else { Scheme::FourierPeriodic };
        let g = Grid1D::new(l, n, scheme).unwrap();
        let d1 = g.first_derivative_matrix();
        let d2 = g.second_derivative_matrix();
        let ones = vec![1.0; n];
        prop_assert!(apply(&d1, &ones).iter().all(|v| v.abs() < 1e-10));
        prop_assert!(apply(&d2, &ones).iter().all(|v| v.abs() < 1e-9 * (n * n) as f64 / (l * l)));
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(d1[(i, j)], -d1[(j, i)]);
                prop_assert_eq!(d2[(i, j)], d2[(j, i)]);
            }
        }
        if !fd && mode < n / 2 {
            let k = std::f64::consts::PI * mode as f64 / l;
            let x = g.nodes();
            let f: Vec<f64> = x.iter().map(|x| (k * x).sin()).collect();
            let df = apply(&d1, &f);
            for (xi, d) in x.iter().zip(&df) {
                prop_assert!((d - k * (k * xi).cos()).abs() < 1e-9 * (1.0 + k));
            }
        }
    }

    #[test]
    fn sector_basis_is_orthonormal(half in 2usize..30, two in any::<bool>(), seed in prop::collection::vec(-1.0..1.0f64, 128)) {
        let n = 2 * half;
        let g = Grid1D::fourier(5.0, n).unwrap();
        let signs: &[f64] = if two { &[1.0, -1.0] } else { &[1.0] };
        let [even, odd] = SectorBasis::pair(&g, signs);
        prop_assert_eq!(even.dim() + odd.dim(), signs.len() * n);
        let y: Vec<f64> = (0..even.dim()).map(|i| seed[i % seed.len()]).collect();
        let back = even.restrict(&even.lift(&y));
        prop_assert!(back.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-14));
        prop_assert!(odd.restrict(&even.lift(&y)).iter().all(|v| v.abs() < 1e-14));
        let x = even.lift(&y);
        let px = even.apply_parity(&g, &x);
        prop_assert!(px.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn verdict_is_odd(dq in -10.0..10.0f64, q in 0.1..10.0f64) {
        let a = VkVerdict::from_slope(dq, q, 1e-6);
        let b = VkVerdict::from_slope(-dq, q, 1e-6);
        match a {
            VkVerdict::Critical => prop_assert_eq!(b, VkVerdict::Critical),
            VkVerdict::VkStableSign => prop_assert_eq!(b, VkVerdict::VkUnstableSign),
            VkVerdict::VkUnstableSign => prop_assert_eq!(b, VkVerdict::VkStableSign),
        }
    }

    #[test]
    fn csv_numbers_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = fmt_num(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-15 * x.abs());
        let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
        prop_assert!(digits >= 12);
    }

    #[test]
    fn linspace_endpoints(a in -5.0..5.0f64, b in -5.0..5.0f64, n in 2usize..50) {
        let v = linspace(a, b, n);
        prop_assert_eq!(v.len(), n);
        prop_assert_eq!(v[0], a);
        prop_assert!((v[n - 1] - b).abs() < 1e-12);
    }

    #[test]
    fn effective_config_round_trips(omega in -0.9..0.9f64, half in 4usize..600, k in 1u32..4) {
        let text = format!(
            r#"{{"equation":"nls","model":{{"family":"soler_power","k":{k},"m":1.0}},"omega":{omega},"grid":{{"N":{}}}}}"#,
            2 * half
        );
        let cfg = RunConfig::from_json(&text).unwrap().effective(Command::Spectrum).unwrap();
        let again = RunConfig::from_json(&serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
        prop_assert_eq!(again.effective(Command::Spectrum).unwrap(), cfg.clone());
        prop_assert_eq!(again.hash(), cfg.hash());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn jl_spectrum_is_paired(k in 1u32..4, omega in 0.1..0.8f64) {
        let model = NonlinearityModel::soler_power(k, 1.0).unwrap();
        let grid = Grid1D::fourier(30.0, 96).unwrap();
        let p = solve_nls_profile(&model, omega, &grid, &SolverOptions::default()).unwrap();
        let pair = jl_pair(&p).unwrap();
        let r = hamiltonian_spectrum(&pair, false, 4096).unwrap();
        prop_assert_eq!(r.len(), 192);
        prop_assert!(r.conjugation_defect() <= 1e-8);
        prop_assert!(r.reflection_defect() <= 1e-8);
    }
}
