//! Bundled example problems and certificates.

use crate::error::Result;
use crate::expr::{parse_problem, BilevelProblem};

pub const Q1_SEC3: &str = include_str!("../../../corpus/q1_sec3.blp");
pub const Q1_SEC4: &str = include_str!("../../../corpus/q1_sec4.blp");
pub const MQ_SEC5: &str = include_str!("../../../corpus/mq_sec5.blp");
pub const Q1_SEC3_CERT: &str = include_str!("../../../corpus/q1_sec3.cert");
pub const Q1_SEC4_CERT: &str = include_str!("../../../corpus/q1_sec4.cert");
pub const MQ_DUAL_CERT: &str = include_str!("../../../corpus/mq_dual.cert");

pub fn q1_sec3() -> Result<BilevelProblem> {
    Ok(parse_problem(Q1_SEC3)?)
}

pub fn q1_sec4() -> Result<BilevelProblem> {
    Ok(parse_problem(Q1_SEC4)?)
}

pub fn mq_sec5() -> Result<BilevelProblem> {
    Ok(parse_problem(MQ_SEC5)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_problems_parse() {
        let p = q1_sec3().unwrap();
        assert_eq!((p.n1, p.n2, p.objectives(), p.upper.len(), p.lower.len()), (1, 1, 2, 1, 2));
        let p = q1_sec4().unwrap();
        assert_eq!((p.upper.len(), p.lower.len(), p.convexificators.len()), (2, 1, 8));
        let p = mq_sec5().unwrap();
        assert_eq!(p.convexificators.len(), 16);
    }

    #[test]
    fn bundled_certificates_verify_exactly() {
        use crate::certfile::parse_cert_file;
        use crate::certify::{assemble, verify_certificate, Scope};
        use num_traits::Zero;
        for (prob, text, scope) in [
            (q1_sec3().unwrap(), Q1_SEC3_CERT, Scope::Active),
            (q1_sec4().unwrap(), Q1_SEC4_CERT, Scope::Active),
            (mq_sec5().unwrap(), MQ_DUAL_CERT, Scope::Declared),
        ] {
            let cert = parse_cert_file(text).unwrap()[0].resolve(&prob).unwrap();
            let data = assemble(&prob, &cert.point, scope).unwrap();
            let r = verify_certificate(&data, &cert).unwrap();
            assert!(r.passed(), "{}: {:?}", prob.name, r.issues);
            assert!(r.residual.iter().all(Zero::is_zero));
            if scope == Scope::Active {
                assert!(r.complementarity.iter().all(|(_, v)| v.is_zero()));
            }
        }
    }
}
