use std::ffi::CStr;
use std::ptr;

use sghdg_ffi::*;

fn last_error() -> String {
    let p = sghdg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn problem(beta: f64, f: f64) -> SghdgProblem {
    SghdgProblem {
        alpha: 1.0,
        beta,
        f,
        u_left: 0.0,
        u_right: 1.0,
        domain_left: 0.0,
        domain_right: 1.0,
    }
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(sghdg_bernoulli(1.0, &mut v), SghdgStatus::Ok);
        assert!((v - 0.5819767068693264).abs() < 1e-15);
        assert_eq!(sghdg_delta(0, 1.0, &mut v), SghdgStatus::Ok);
        assert!((v - 0.16395341373865285).abs() < 1e-15);
        assert_eq!(sghdg_delta_closed_form(1, 1.0, &mut v), SghdgStatus::Ok);
        assert!((v - 0.09929355660768976).abs() < 1e-14);

        let mut c = SghdgCoefficients::default();
        assert_eq!(sghdg_coefficients(2, 0.5, 1.5, &mut c), SghdgStatus::Ok);
        assert!((c.c1 + c.c2 + c.c3).abs() < 1e-12);
        assert!((c.r + 1.0).abs() < 1e-12);

        let mut t = SghdgTau::default();
        assert_eq!(sghdg_sg_tau(0, 0.25, 1.0, 4.0, &mut t), SghdgStatus::Ok);
        assert!((t.tau - 0.6558136549546114).abs() < 1e-13);
        assert!(!t.ill_conditioned);
    }
    assert!(sghdg_last_error_message().is_null());
    let version = unsafe { CStr::from_ptr(sghdg_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn errors_set_status_and_message() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(sghdg_delta(0, 0.0, &mut v), SghdgStatus::InvalidArgument);
        assert!(last_error().contains("Peclet"));
        assert_eq!(
            sghdg_delta_closed_form(7, 1.0, &mut v),
            SghdgStatus::InvalidArgument
        );
        assert_eq!(
            sghdg_bernoulli(1.0, ptr::null_mut()),
            SghdgStatus::NullPointer
        );
        assert_eq!(
            sghdg_exact_u(ptr::null(), 0.5, &mut v),
            SghdgStatus::NullPointer
        );

        let p = problem(4.0, 0.0);
        let mut h = ptr::null_mut();
        assert_eq!(
            sghdg_hdg_solve(&p, 1, 1, 1.0, &mut h),
            SghdgStatus::InvalidArgument
        );
        assert!(h.is_null());
        assert!(last_error().contains("cells"));
    }
    // a successful call clears the message
    unsafe { sghdg_bernoulli(0.0, &mut v) };
    assert!(sghdg_last_error_message().is_null());
}

#[test]
fn hdg_handle_lifecycle() {
    let p = problem(4.0, 0.0);
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(sghdg_hdg_solve(&p, 4, 1, f64::NAN, &mut h), SghdgStatus::Ok);
        assert!(!h.is_null());
        let n = sghdg_hdg_trace_len(h);
        assert_eq!(n, 5);
        let mut buf = vec![0.0; n];
        assert_eq!(
            sghdg_hdg_trace(h, buf.as_mut_ptr(), 2),
            SghdgStatus::BufferTooSmall
        );
        assert_eq!(sghdg_hdg_trace(h, buf.as_mut_ptr(), n), SghdgStatus::Ok);
        assert!((buf[2] - 0.11920292202211755).abs() < 1e-13);

        let mut r = SghdgErrorReport::default();
        assert_eq!(sghdg_hdg_error_report(h, &mut r), SghdgStatus::Ok);
        assert!(r.trace_linf < 1e-12);
        assert!(r.flux_l2.is_finite());

        let mut u = 0.0;
        assert_eq!(sghdg_hdg_evaluate_u(h, 0.5, &mut u), SghdgStatus::Ok);
        assert_eq!(
            sghdg_hdg_evaluate_j(h, 2.0, &mut u),
            SghdgStatus::InvalidArgument
        );

        let mut tau = 0.0;
        sghdg_hdg_tau(h, &mut tau);
        assert!((tau - 4.0 * 0.09929355660768976).abs() < 1e-13);
        sghdg_hdg_free(h);
        sghdg_hdg_free(ptr::null_mut());
    }
}

#[test]
fn hdg_matches_sg_through_the_c_api() {
    let p = problem(10.0, 1.0);
    unsafe {
        let (mut h, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sghdg_hdg_solve(&p, 16, 2, 0.0, &mut h), SghdgStatus::Ok);
        assert_eq!(sghdg_sg_solve(&p, 16, &mut s), SghdgStatus::Ok);
        let n = sghdg_sg_len(s);
        assert_eq!(n, sghdg_hdg_trace_len(h));
        let (mut a, mut b) = (vec![0.0; n], vec![0.0; n]);
        sghdg_hdg_trace(h, a.as_mut_ptr(), n);
        sghdg_sg_values(s, b.as_mut_ptr(), n);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
        sghdg_hdg_free(h);
        sghdg_sg_free(s);
        assert_eq!(sghdg_sg_len(ptr::null()), 0);
    }
}

#[test]
fn errors_are_per_thread() {
    let mut v = 0.0;
    unsafe { sghdg_delta(0, 0.0, &mut v) };
    std::thread::spawn(|| assert!(sghdg_last_error_message().is_null()))
        .join()
        .unwrap();
    assert!(!sghdg_last_error_message().is_null());
}
