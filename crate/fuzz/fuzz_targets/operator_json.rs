#![no_main]

use libfuzzer_sys::fuzz_target;
use qcv_core::braidedmod::{BalancingData, EOperatorFamily, ModuleRep};
use qcv_core::tensorcalc::TensorOperator;
use qcv_core::{Params, Rat, RationalScalar};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let p = Params::at_i64((3, 5), (7, 2));
    if let Ok(op) = TensorOperator::<RationalScalar>::from_json_str(s) {
        let back = TensorOperator::<RationalScalar>::from_json_str(&op.to_json().to_string())
            .expect("operator round trip");
        assert_eq!(back, op);
    }
    let sym = Params::symbolic();
    if let Ok(fam) = EOperatorFamily::<RationalScalar>::from_json_str(s, &sym) {
        let back =
            EOperatorFamily::<RationalScalar>::from_json_str(&fam.to_json().to_string(), &sym)
                .expect("family round trip");
        assert_eq!(back, fam);
        let _ = BalancingData::<Rat>::from_json_str(s, fam.m, fam.n, &p);
    }
    let _ = EOperatorFamily::<Rat>::from_json_str(s, &p);
    if let Ok(rho) = ModuleRep::<RationalScalar>::from_json_str(s, &sym) {
        let back = ModuleRep::<RationalScalar>::from_json_str(&rho.to_json().to_string(), &sym)
            .expect("module round trip");
        assert_eq!(back, rho);
    }
});
