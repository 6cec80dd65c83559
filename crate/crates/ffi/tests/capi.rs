//! Exercises the C ABI the way a foreign binding would: raw pointers,
//! status codes, JSON strings, explicit frees.

use distframe_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(df_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

fn take_json(ptr: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(ptr).to_string_lossy().into_owned() };
    unsafe { df_string_free(ptr) };
    s
}

#[test]
fn classify_fourier_through_the_c_api() {
    unsafe {
        let mut space = ptr::null_mut();
        assert_eq!(df_space_new(16, &mut space), DfStatus::DfOk);
        let mut grid = ptr::null_mut();
        assert_eq!(df_grid_auto(space, 0, &mut grid), DfStatus::DfOk);
        assert_eq!(df_grid_len(grid), 16);
        let mut map = ptr::null_mut();
        assert_eq!(df_map_builtin(0, space, grid, &mut map), DfStatus::DfOk);

        let mut lower = 0.0;
        let mut upper = 0.0;
        assert_eq!(df_frame_bounds(map, &mut lower, &mut upper), DfStatus::DfOk);
        assert!((lower - 1.0).abs() < 1e-8 && (upper - 1.0).abs() < 1e-8);

        let mut json = ptr::null_mut();
        assert_eq!(df_classify_json(map, &mut json), DfStatus::DfOk);
        let text = take_json(json);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["flags"]["gelfand"], true);
        assert_eq!(parsed["N"], 16);

        df_map_free(map);
        df_grid_free(grid);
        df_space_free(space);
    }
}

#[test]
fn dual_and_pair_report_round_trip() {
    unsafe {
        let mut space = ptr::null_mut();
        assert_eq!(df_space_new(8, &mut space), DfStatus::DfOk);
        let mut grid = ptr::null_mut();
        assert_eq!(df_grid_auto(space, 0, &mut grid), DfStatus::DfOk);
        let mut zeta = ptr::null_mut();
        assert_eq!(df_map_builtin(0, space, grid, &mut zeta), DfStatus::DfOk);

        // transform by the adjoint of diag(1..8)
        let n = 8usize;
        let mut re = vec![0.0f64; n * n];
        let im = vec![0.0f64; n * n];
        for k in 0..n {
            re[k * n + k] = (k + 1) as f64;
        }
        let mut omega = ptr::null_mut();
        assert_eq!(
            df_map_transform(zeta, re.as_ptr(), im.as_ptr(), n, &mut omega),
            DfStatus::DfOk
        );

        let mut theta = ptr::null_mut();
        assert_eq!(df_canonical_dual(omega, &mut theta), DfStatus::DfOk);

        let mut residual = 1.0;
        assert_eq!(
            df_reconstruction_residual(omega, theta, &mut residual),
            DfStatus::DfOk
        );
        assert!(residual <= 1e-9, "residual {residual}");

        let mut json = ptr::null_mut();
        assert_eq!(df_pair_report_json(theta, omega, &mut json), DfStatus::DfOk);
        let parsed: serde_json::Value = serde_json::from_str(&take_json(json)).unwrap();
        assert_eq!(parsed["compatible"], true);

        // degrade the dual and watch the verdict flip
        let mut broken = ptr::null_mut();
        assert_eq!(df_map_zero_row(theta, 0, &mut broken), DfStatus::DfOk);
        let mut json = ptr::null_mut();
        assert_eq!(df_pair_report_json(broken, omega, &mut json), DfStatus::DfOk);
        let parsed: serde_json::Value = serde_json::from_str(&take_json(json)).unwrap();
        assert_eq!(parsed["compatible"], false);

        df_map_free(broken);
        df_map_free(theta);
        df_map_free(omega);
        df_map_free(zeta);
        df_grid_free(grid);
        df_space_free(space);
    }
}

#[test]
fn sweep_and_oracle_check() {
    unsafe {
        let sizes = [4usize, 8, 16];
        let mut json = ptr::null_mut();
        assert_eq!(
            df_sweep_json(2, sizes.as_ptr(), sizes.len(), &mut json),
            DfStatus::DfOk
        );
        let parsed: serde_json::Value = serde_json::from_str(&take_json(json)).unwrap();
        assert_eq!(parsed["unbounded_upper"], true);

        let mut frame_dev = 1.0;
        let mut adjoint_dev = 1.0;
        assert_eq!(
            df_oracle_check(10, 3, 16, &mut frame_dev, &mut adjoint_dev),
            DfStatus::DfOk
        );
        assert!(frame_dev <= 1e-12);
        assert!(adjoint_dev <= 1e-12);
    }
}

#[test]
fn csv_round_trip_through_files() {
    unsafe {
        let dir = std::env::temp_dir().join(format!("distframe-ffi-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let csv_path = dir.join("map.csv");
        let c_path = CString::new(csv_path.to_str().unwrap()).unwrap();

        let mut space = ptr::null_mut();
        assert_eq!(df_space_new(6, &mut space), DfStatus::DfOk);
        let mut grid = ptr::null_mut();
        assert_eq!(df_grid_auto(space, 1, &mut grid), DfStatus::DfOk);
        let mut map = ptr::null_mut();
        assert_eq!(df_map_builtin(1, space, grid, &mut map), DfStatus::DfOk);
        assert_eq!(df_map_to_csv_file(map, c_path.as_ptr()), DfStatus::DfOk);

        let mut reloaded = ptr::null_mut();
        assert_eq!(
            df_map_from_csv_file(c_path.as_ptr(), space, grid, &mut reloaded),
            DfStatus::DfOk
        );
        let mut a = 0.0;
        let mut b = 0.0;
        assert_eq!(df_frame_bounds(reloaded, &mut a, &mut b), DfStatus::DfOk);
        assert!((a - 1.0).abs() < 1e-8 && (b - 1.0).abs() < 1e-8);

        df_map_free(reloaded);
        df_map_free(map);
        df_grid_free(grid);
        df_space_free(space);
        let _ = std::fs::remove_dir_all(&dir);
    }
}

#[test]
fn scenario_execution_through_the_c_api() {
    unsafe {
        let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
        let scenario = root.join("scenarios/fourier_gelfand.json");
        let out_dir = std::env::temp_dir().join(format!(
            "distframe-ffi-scenario-{}",
            std::process::id()
        ));
        let c_scenario = CString::new(scenario.to_str().unwrap()).unwrap();
        let c_out = CString::new(out_dir.to_str().unwrap()).unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(
            df_run_scenario(c_scenario.as_ptr(), c_out.as_ptr(), &mut json),
            DfStatus::DfOk
        );
        let parsed: serde_json::Value = serde_json::from_str(&take_json(json)).unwrap();
        assert_eq!(parsed["scenario"], "fourier_gelfand");
        assert_eq!(parsed["tasks"][0]["result"]["flags"]["gelfand"], true);
        let _ = std::fs::remove_dir_all(&out_dir);
    }
}

#[test]
fn error_paths_set_codes_and_messages() {
    unsafe {
        // invalid dimension
        let mut space = ptr::null_mut();
        assert_eq!(df_space_new(0, &mut space), DfStatus::DfInvalidArgument);
        assert!(!last_error().is_empty());

        // bad kind
        let mut ok_space = ptr::null_mut();
        assert_eq!(df_space_new(4, &mut ok_space), DfStatus::DfOk);
        let mut grid = ptr::null_mut();
        assert_eq!(
            df_grid_auto(ok_space, 99, &mut grid),
            DfStatus::DfInvalidArgument
        );

        // bad domain
        assert_eq!(
            df_grid_new(1, 10, 2.0, 1.0, &mut grid),
            DfStatus::DfBadDomain
        );
        assert!(last_error().contains("domain"));

        // null arguments
        assert_eq!(
            df_map_builtin(0, ptr::null(), ptr::null(), ptr::null_mut()),
            DfStatus::DfNullArgument
        );
        let mut lower = 0.0;
        let mut upper = 0.0;
        assert_eq!(
            df_frame_bounds(ptr::null(), &mut lower, &mut upper),
            DfStatus::DfNullArgument
        );

        // a zero map is not a frame
        assert_eq!(df_grid_auto(ok_space, 0, &mut grid), DfStatus::DfOk);
        let mut zeta = ptr::null_mut();
        assert_eq!(df_map_builtin(0, ok_space, grid, &mut zeta), DfStatus::DfOk);
        let n = 4usize;
        let zeros = vec![0.0f64; n * n];
        let mut zero_map = ptr::null_mut();
        assert_eq!(
            df_map_transform(zeta, zeros.as_ptr(), zeros.as_ptr(), n, &mut zero_map),
            DfStatus::DfOk
        );
        let mut dual = ptr::null_mut();
        assert_eq!(df_canonical_dual(zero_map, &mut dual), DfStatus::DfNotAFrame);
        assert!(last_error().contains("frame"));

        // weighted kernel is not a Gel'fand basis
        let mut identity_re = vec![0.0f64; n * n];
        for k in 0..n {
            identity_re[k * n + k] = 1.0;
        }
        let identity_im = vec![0.0f64; n * n];
        let mut wf_grid = ptr::null_mut();
        assert_eq!(df_grid_auto(ok_space, 2, &mut wf_grid), DfStatus::DfOk);
        let mut wf = ptr::null_mut();
        assert_eq!(df_map_builtin(2, ok_space, wf_grid, &mut wf), DfStatus::DfOk);
        let mut atomic = ptr::null_mut();
        assert_eq!(
            df_atomic_map(wf, identity_re.as_ptr(), identity_im.as_ptr(), n, &mut atomic),
            DfStatus::DfNotGelfand
        );

        // scenario parse failure
        let dir = std::env::temp_dir().join(format!("distframe-ffi-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        std::fs::write(&bad, "{ not json").unwrap();
        let c_bad = CString::new(bad.to_str().unwrap()).unwrap();
        let c_out = CString::new(dir.to_str().unwrap()).unwrap();
        let mut json = ptr::null_mut();
        assert_eq!(
            df_run_scenario(c_bad.as_ptr(), c_out.as_ptr(), &mut json),
            DfStatus::DfParseError
        );
        let _ = std::fs::remove_dir_all(&dir);

        df_map_free(zero_map);
        df_map_free(zeta);
        df_map_free(wf);
        df_grid_free(grid);
        df_grid_free(wf_grid);
        df_space_free(ok_space);
    }
}

#[test]
fn generated_header_covers_the_api() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/distframe.h");
    let text = std::fs::read_to_string(&header).expect("committed header present");
    for symbol in [
        "typedef enum DfStatus",
        "typedef struct DfGrid DfGrid",
        "typedef struct DfMap DfMap",
        "typedef struct DfSpace DfSpace",
        "df_space_new",
        "df_grid_new",
        "df_grid_auto",
        "df_map_builtin",
        "df_map_transform",
        "df_classify_json",
        "df_canonical_dual",
        "df_reconstruction_residual",
        "df_pair_report_json",
        "df_sweep_json",
        "df_run_scenario",
        "df_string_free",
        "df_last_error_message",
    ] {
        assert!(text.contains(symbol), "header missing {symbol}");
    }
}
