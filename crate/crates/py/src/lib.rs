//! Python bindings for the quartic census library.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use quartic_census::asymptotics::{main_term, Theorem, DEFAULT_PRIME_LIMIT};
use quartic_census::census::{count_d4_by_conductor, count_d4_by_disc, count_v4_by_disc, run_census, CensusConfig};
use quartic_census::classify::{galois_tag_of_form, real_signature};
use quartic_census::densities::{euler_product, rho1, rho2, rho2_prime, rho2_zero, rho_v4, ProductKind};
use quartic_census::forms::{disc_quartic, family_membership, from_form};
use quartic_census::maximality::is_maximal as maximal_report;
use quartic_census::resolvent::conductor_poly;
use quartic_census::{BinQuartForm, Family, FamilyCoords, GaloisTag};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coords(family: i64, a: i128, b: i128, c: i128) -> PyResult<FamilyCoords> {
    Ok(FamilyCoords::new(Family::from_index(family).map_err(err)?, a, b, c))
}

/// Discriminant, Galois tag, r2, family membership and maximality of a4 x^4 + ... + a0 y^4.
#[pyfunction]
fn classify<'py>(py: Python<'py>, coeffs: [i128; 5]) -> PyResult<Bound<'py, PyDict>> {
    let f = BinQuartForm::from_coeffs(coeffs);
    let disc = disc_quartic(&f).map_err(err)?;
    if disc == 0 {
        return Err(err("zero discriminant"));
    }
    let d = PyDict::new(py);
    d.set_item("disc", disc)?;
    d.set_item("galois", galois_tag_of_form(&f).map_err(err)?.as_str())?;
    d.set_item("r2", real_signature(&f).map_err(err)?)?;
    let fams = family_membership(&f).map_err(err)?;
    d.set_item("families", fams.iter().map(|f| f.index()).collect::<Vec<_>>())?;
    if let Some(fam) = fams.first() {
        let c = from_form(&f, *fam).map_err(err)?;
        d.set_item("conductor", conductor_poly(&c).map_err(err)?)?;
        d.set_item("maximal", maximal_report(&c).map_err(err)?.maximal)?;
    }
    Ok(d)
}

#[pyfunction]
fn is_maximal(family: i64, a: i128, b: i128, c: i128) -> PyResult<bool> {
    Ok(maximal_report(&coords(family, a, b, c)?).map_err(err)?.maximal)
}

#[pyfunction]
fn conductor(family: i64, a: i128, b: i128, c: i128) -> PyResult<i128> {
    conductor_poly(&coords(family, a, b, c)?).map_err(err)
}

/// D4 fields with |conductor| < x, as counts for r2 = 0, 1, 2.
#[pyfunction]
#[pyo3(signature = (x, shards=1))]
fn census_conductor(py: Python<'_>, x: i128, shards: usize) -> PyResult<[u64; 3]> {
    py.detach(|| count_d4_by_conductor(x, shards.max(1))).map(|r| r.counts).map_err(err)
}

/// Fields with |disc| < x and the given Galois group. V4 is returned as a single total.
#[pyfunction]
#[pyo3(signature = (x, galois="d4", shards=1))]
fn census_discriminant(py: Python<'_>, x: i128, galois: &str, shards: usize) -> PyResult<Vec<u64>> {
    let tag: GaloisTag = galois.parse().map_err(err)?;
    py.detach(|| match tag {
        GaloisTag::V4 => count_v4_by_disc(x, false).map(|v| vec![v.count]),
        GaloisTag::D4 => count_d4_by_disc(x, shards.max(1)).map(|r| r.counts.to_vec()),
        _ => run_census(&CensusConfig { shards: shards.max(1), ..CensusConfig::discriminant(x, tag) })
            .map(|r| r.counts.to_vec()),
    })
    .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (kind, m, a=1))]
fn density(kind: &str, m: i128, a: i128) -> PyResult<u64> {
    if m < 1 {
        return Err(err("modulus must be positive"));
    }
    Ok(match kind {
        "rho1" => rho1(a, m),
        "rho2" => rho2(a, m),
        "rho2_zero" => rho2_zero(a),
        "rho2_prime" => rho2_prime(a, m),
        "rho_v4" => rho_v4(m),
        _ => return Err(err(format!("unknown density '{kind}'"))),
    })
}

#[pyfunction]
#[pyo3(signature = (prime_limit=DEFAULT_PRIME_LIMIT))]
fn carefree_product(prime_limit: u64) -> PyResult<f64> {
    if prime_limit < 2 {
        return Err(err("prime limit must be at least 2"));
    }
    Ok(euler_product(ProductKind::Carefree, prime_limit).value)
}

/// Main term for D4 fields by conductor (r2 = None sums over signatures) or V4 by discriminant.
#[pyfunction]
#[pyo3(signature = (x, kind="d4", r2=None, prime_limit=1_000_000))]
fn leading_term(x: f64, kind: &str, r2: Option<u8>, prime_limit: u64) -> PyResult<f64> {
    let theorem = match kind {
        "d4" => Theorem::D4Conductor,
        "v4" => Theorem::V4Disc,
        _ => return Err(err(format!("unknown kind '{kind}'"))),
    };
    if r2.is_some_and(|r| r > 2) || prime_limit < 2 {
        return Err(err("r2 must be 0, 1 or 2"));
    }
    Ok(main_term(theorem, x, r2, prime_limit).value)
}

#[pymodule]
fn quartic_census_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", quartic_census::VERSION)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(is_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(conductor, m)?)?;
    m.add_function(wrap_pyfunction!(census_conductor, m)?)?;
    m.add_function(wrap_pyfunction!(census_discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(carefree_product, m)?)?;
    m.add_function(wrap_pyfunction!(leading_term, m)?)?;
    Ok(())
}
