//! Exercises the C ABI surface through the exported extern "C" functions.

use rhostar_ffi::*;

fn make_l1(dim: usize) -> *mut RhostarSpace {
    let mut space: *mut RhostarSpace = std::ptr::null_mut();
    let status = unsafe { rhostar_space_l1(dim, &mut space) };
    assert_eq!(status, RhostarStatus::Ok);
    assert!(!space.is_null());
    space
}

#[test]
fn norm_and_derivatives_across_the_abi() {
    let space = make_l1(3);
    let x = [1.0, 0.0, 0.0];
    let y = [1.0, 1.0, 1.0];

    unsafe {
        assert_eq!(rhostar_space_dim(space), 3);

        let mut norm = 0.0;
        assert_eq!(rhostar_norm(space, y.as_ptr(), 3, &mut norm), RhostarStatus::Ok);
        assert_eq!(norm, 3.0);

        let mut value = 0.0;
        assert_eq!(
            rhostar_rho_minus(space, x.as_ptr(), y.as_ptr(), 3, &mut value),
            RhostarStatus::Ok
        );
        assert_eq!(value, -1.0);
        assert_eq!(
            rhostar_rho_plus(space, x.as_ptr(), y.as_ptr(), 3, &mut value),
            RhostarStatus::Ok
        );
        assert_eq!(value, 3.0);
        assert_eq!(
            rhostar_rho(space, x.as_ptr(), y.as_ptr(), 3, &mut value),
            RhostarStatus::Ok
        );
        assert_eq!(value, 1.0);
        assert_eq!(
            rhostar_rho_star(space, x.as_ptr(), y.as_ptr(), 3, &mut value),
            RhostarStatus::Ok
        );
        assert_eq!(value, -3.0);

        rhostar_space_free(space);
    }
}

#[test]
fn orthogonality_verdicts() {
    let space = make_l1(3);
    let x = [1.0, 0.0, 0.0];
    let y = [1.0, 1.0, 1.0];
    let z = [1.0, 1.0, 0.0];

    unsafe {
        let mut holds = false;
        let mut residual = 0.0;
        let status = rhostar_is_orthogonal(
            space,
            x.as_ptr(),
            y.as_ptr(),
            3,
            RhostarFlavor::Birkhoff,
            1e-9,
            1e-9,
            &mut holds,
            &mut residual,
            std::ptr::null_mut(),
        );
        assert_eq!(status, RhostarStatus::Ok);
        assert!(holds);

        let status = rhostar_is_orthogonal(
            space,
            x.as_ptr(),
            y.as_ptr(),
            3,
            RhostarFlavor::RhoStar,
            1e-9,
            1e-9,
            &mut holds,
            &mut residual,
            std::ptr::null_mut(),
        );
        assert_eq!(status, RhostarStatus::Ok);
        assert!(!holds);
        assert_eq!(residual, 3.0);

        let status = rhostar_is_orthogonal(
            space,
            x.as_ptr(),
            z.as_ptr(),
            3,
            RhostarFlavor::RhoStar,
            1e-9,
            1e-9,
            &mut holds,
            &mut residual,
            std::ptr::null_mut(),
        );
        assert_eq!(status, RhostarStatus::Ok);
        assert!(holds);

        // sip on a non-smooth family is rejected
        let status = rhostar_is_orthogonal(
            space,
            x.as_ptr(),
            z.as_ptr(),
            3,
            RhostarFlavor::Sip,
            1e-9,
            1e-9,
            &mut holds,
            &mut residual,
            std::ptr::null_mut(),
        );
        assert_eq!(status, RhostarStatus::NotSmooth);

        rhostar_space_free(space);
    }
}

#[test]
fn decomposition_across_the_abi() {
    let space = make_l1(3);
    let x = [1.0, 0.0, 0.0];
    let mut y = [0.0; 3];
    let mut r1 = f64::NAN;
    let mut r2 = f64::NAN;
    let mut holds = false;

    unsafe {
        let status = rhostar_thalesian_decompose(
            space,
            x.as_ptr(),
            3,
            1.0,
            7,
            y.as_mut_ptr(),
            &mut r1,
            &mut r2,
            &mut holds,
        );
        assert_eq!(status, RhostarStatus::Ok);
        assert!(holds);
        assert!(r1 <= 1e-9);
        assert!(r2 <= 1e-9);
        // verify the first relation through the ABI as well
        let mut rho_star_xy = f64::NAN;
        assert_eq!(
            rhostar_rho_star(space, x.as_ptr(), y.as_ptr(), 3, &mut rho_star_xy),
            RhostarStatus::Ok
        );
        assert!(rho_star_xy.abs() <= 1e-9);

        rhostar_space_free(space);
    }
}

#[test]
fn status_codes_and_null_handling() {
    unsafe {
        // null out pointer
        assert_eq!(
            rhostar_space_l1(3, std::ptr::null_mut()),
            RhostarStatus::NullPointer
        );

        // invalid lp parameter
        let mut space: *mut RhostarSpace = std::ptr::null_mut();
        assert_eq!(rhostar_space_lp(2, 1.0, &mut space), RhostarStatus::InvalidNorm);

        // rank-deficient polyhedral rows
        let rows = [1.0, 0.0, 2.0, 0.0];
        assert_eq!(
            rhostar_space_polyhedral(2, rows.as_ptr(), 2, &mut space),
            RhostarStatus::InvalidNorm
        );

        // non-finite coordinates
        let space = make_l1(2);
        let bad = [f64::NAN, 0.0];
        let mut out = 0.0;
        assert_eq!(
            rhostar_norm(space, bad.as_ptr(), 2, &mut out),
            RhostarStatus::NonFinite
        );

        // freeing NULL is a no-op
        rhostar_space_free(std::ptr::null_mut());
        rhostar_space_free(space);

        // status names are readable C strings
        let name = rhostar_status_name(RhostarStatus::DimensionMismatch);
        let text = std::ffi::CStr::from_ptr(name).to_str().unwrap();
        assert_eq!(text, "dimension mismatch");
    }
}

#[test]
fn weighted_lp_round_trip() {
    let mut space: *mut RhostarSpace = std::ptr::null_mut();
    let weights = [4.0, 4.0];
    unsafe {
        assert_eq!(
            rhostar_space_weighted_lp(2, 2.0, weights.as_ptr(), &mut space),
            RhostarStatus::Ok
        );
        let x = [3.0, 4.0];
        let mut norm = 0.0;
        assert_eq!(rhostar_norm(space, x.as_ptr(), 2, &mut norm), RhostarStatus::Ok);
        assert_eq!(norm, 10.0); // 2 * euclidean
        rhostar_space_free(space);
    }
}
