use super::{gale_volume_sum, pfaffian_product, pfaffian_volume, spine_volume_integrand_quadrature, SpineSpec};
use crate::error::{Error, Result};
use crate::rational::{abs, format_q, to_f64, Q};
use crate::report::CheckReport;
use serde::Serialize;
use serde_json::json;

/// One line of the volume comparison table.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeRow {
    pub spec: String,
    pub gale_n: u64,
    /// exact rational
    pub gale_value: String,
    /// absent when the dimension is beyond the quadrature range
    #[serde(rename = "quadrature_estimate")]
    pub quadrature: Option<f64>,
    #[serde(rename = "quadrature_stderr")]
    pub quadrature_error: Option<f64>,
    /// exact rational
    pub closed_form: String,
    pub gap_gale: f64,
    pub gap_quadrature: Option<f64>,
}

pub fn volume_row(spec: &SpineSpec, gale_n: u64) -> Result<VolumeRow> {
    let closed = pfaffian_product(spec)?;
    let gale = gale_volume_sum(spec, gale_n)?;
    let quad = match spine_volume_integrand_quadrature(spec) {
        Ok(r) => Some(r),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    let closed_f = to_f64(&closed);
    Ok(VolumeRow {
        spec: spec.to_string(),
        gale_n,
        gale_value: format_q(&gale),
        quadrature: quad.as_ref().map(|r| r.value),
        quadrature_error: quad.as_ref().map(|r| r.error_estimate),
        closed_form: format_q(&closed),
        gap_gale: to_f64(&(&closed - &gale)),
        gap_quadrature: quad.map(|r| (r.value - closed_f).abs()),
    })
}

pub fn volume_table_csv(rows: &[VolumeRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::invalid(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Every set of distinct exponents from `1..=max_entry` with at most
/// `max_dim` elements, each listed in descending order.
pub fn exponent_sets(max_dim: usize, max_entry: u32) -> Vec<SpineSpec> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << max_entry) {
        if mask.count_ones() as usize > max_dim {
            continue;
        }
        let exps: Vec<u32> = (1..=max_entry).rev().filter(|e| mask >> (e - 1) & 1 == 1).collect();
        out.push(SpineSpec::new(exps).expect("distinct positive exponents"));
    }
    out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.descending().cmp(&b.descending())));
    out
}

/// Quadrature tolerance against the closed form.
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;

/// Per spec: Pfaffian determinant and product formula agree exactly,
/// `|gale(n) - closed| ≤ 5 Σe / n`, and `|quadrature - closed| ≤ 1e-9`
/// where the quadrature applies.
pub fn check_volume_oracles(specs: &[SpineSpec], gale_n: u64) -> Result<CheckReport> {
    if gale_n < 2 {
        return Err(Error::invalid("the Gale sum needs at least 2 points"));
    }
    let mut report = CheckReport::new(
        "spine hull volume oracles agree",
        specs.iter().map(|s| format!("{s}, Gale n = {gale_n}")).collect(),
    );
    for spec in specs {
        let closed = pfaffian_product(spec)?;
        let pf = pfaffian_volume(spec)?;
        let gale = gale_volume_sum(spec, gale_n)?;
        let bound = Q::new((5 * spec.exponent_sum()).into(), gale_n.into());
        let gale_gap = abs(&(&gale - &closed));
        let quad = match spine_volume_integrand_quadrature(spec) {
            Ok(r) => Some(r),
            Err(Error::Capacity { .. }) => None,
            Err(e) => return Err(e),
        };
        let quad_gap = quad.as_ref().map(|r| (r.value - to_f64(&closed)).abs());
        let ok = pf == closed && gale_gap <= bound && quad_gap.is_none_or(|g| g <= QUADRATURE_TOLERANCE);
        report.push(
            ok,
            json!({"spec": spec.to_string(), "closed_form": format_q(&closed), "pfaffian": format_q(&pf),
                   "gale": format_q(&gale), "gale_gap": to_f64(&gale_gap), "gale_bound": format_q(&bound),
                   "quadrature": quad, "quadrature_gap": quad_gap}),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_and_csv() {
        let row = volume_row(&SpineSpec::new(vec![2, 1]).unwrap(), 2).unwrap();
        assert_eq!(row.gale_value, "1/8");
        assert_eq!(row.closed_form, "1/6");
        assert!((row.gap_gale - 1.0 / 24.0).abs() < 1e-15);
        assert!(row.gap_quadrature.unwrap() < 1e-12);
        let csv = volume_table_csv(&[row]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "spec,gale_n,gale_value,quadrature_estimate,quadrature_stderr,closed_form,gap_gale,gap_quadrature"
        );
        assert!(lines.next().unwrap().starts_with("\"(2,1)\",2,1/8,"));
    }

    #[test]
    fn exponent_set_enumeration() {
        let all = exponent_sets(5, 6);
        assert_eq!(all.len(), 6 + 15 + 20 + 15 + 6);
        assert_eq!(all[0].exponents(), &[1]);
        assert!(all.iter().all(|s| s.exponents().windows(2).all(|w| w[0] > w[1])));
        assert_eq!(exponent_sets(1, 3).len(), 3);
    }

    #[test]
    fn oracle_report() {
        let specs = vec![SpineSpec::new(vec![2, 1]).unwrap(), SpineSpec::new(vec![5, 4, 3]).unwrap()];
        let r = check_volume_oracles(&specs, 400).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.certificates[1]["closed_form"], "1/1512");
        // at n = 2 the bound 15/2 is loose but the gap is 1/24
        let far = check_volume_oracles(&specs[..1], 2).unwrap();
        assert!(far.passed());
        assert!(check_volume_oracles(&specs, 1).is_err());
    }
}
