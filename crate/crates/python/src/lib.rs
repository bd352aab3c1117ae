//! Python bindings for the core types and operations: binomial
//! valuations, admissibility verdicts, the gamma-series route, the
//! deleted-quadric presentation, and formula verification.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sumsq::admissibility as adm;
use sumsq::formula::{ConsistencyReport, SosFormula};
use sumsq::{binomial as binom, gamma, grothendieck};

fn value_error(e: sumsq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn binomial(n: u64, i: u64) -> BigInt {
    binom::binomial(n, i)
}

#[pyfunction]
fn two_adic_valuation(m: BigInt) -> PyResult<u64> {
    binom::two_adic_valuation(&m).map_err(value_error)
}

#[pyfunction]
fn kummer_valuation(n: u64, i: u64) -> PyResult<u64> {
    binom::kummer_valuation(n, i).map_err(value_error)
}

#[pyfunction]
fn pascal_express(n: u64, k: i64, i: u64) -> PyResult<Vec<BigInt>> {
    binom::pascal_express(n, k, i).map_err(value_error)
}

#[pyfunction]
fn divisibility_set_equiv(n: u64, k: i64, i: u64, b: BigInt) -> PyResult<(bool, bool)> {
    binom::divisibility_set_equiv(n, k, i, &b).map_err(value_error)
}

/// One divisibility requirement from a verdict.
#[pyclass(get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
struct Constraint {
    i: u64,
    required_exponent: u64,
    binomial: BigInt,
    valuation: Option<u64>,
    satisfied: bool,
}

#[pymethods]
impl Constraint {
    fn __repr__(&self) -> String {
        format!(
            "Constraint(i={}, required_exponent={}, binomial={}, valuation={:?}, satisfied={})",
            self.i, self.required_exponent, self.binomial, self.valuation, self.satisfied
        )
    }
}

/// Outcome of one condition form on one triple.
#[pyclass(get_all, frozen)]
struct Verdict {
    passes: bool,
    form: String,
    constraints: Vec<Constraint>,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!(
            "Verdict(form={:?}, passes={}, constraints={})",
            self.form,
            self.passes,
            self.constraints.len()
        )
    }
}

fn wrap_verdict(v: adm::Verdict) -> Verdict {
    Verdict {
        passes: v.passes,
        form: match v.form {
            adm::ConditionForm::Direct => "direct".to_string(),
            adm::ConditionForm::Shifted => "shifted".to_string(),
        },
        constraints: v
            .constraints
            .into_iter()
            .map(|c| Constraint {
                i: c.i,
                required_exponent: c.required_exponent,
                binomial: c.binomial,
                valuation: c.valuation,
                satisfied: c.satisfied,
            })
            .collect(),
    }
}

/// Condition `2^(c-i+1) | C(n, i)` over the constraint range.
#[pyfunction]
fn check(r: u64, s: u64, n: u64) -> PyResult<Verdict> {
    let t = adm::Triple::new(r, s, n).map_err(value_error)?;
    Ok(wrap_verdict(adm::check_direct(&t)))
}

/// Equivalent condition `2^(c-i+1) | C(r+i-1, i)`.
#[pyfunction]
fn check_shifted(r: u64, s: u64, n: u64) -> PyResult<Verdict> {
    let t = adm::Triple::new(r, s, n).map_err(value_error)?;
    Ok(wrap_verdict(adm::check_shifted(&t)))
}

#[pyfunction]
fn minimal_admissible_n(r: u64, s: u64) -> PyResult<u64> {
    adm::minimal_admissible_n(r, s).map_err(value_error)
}

#[pyfunction]
fn admissibility_table(r_max: u64, s_max: u64) -> PyResult<Vec<Vec<u64>>> {
    adm::admissibility_table(r_max, s_max).map_err(value_error)
}

/// An element `a + b*nu` of `Z[nu]/(2^c nu, nu^2 = -2nu)`.
#[pyclass(get_all, frozen)]
struct GammaElement {
    unit: BigInt,
    nu: BigInt,
    modulus_exponent: u32,
}

#[pymethods]
impl GammaElement {
    fn is_zero(&self) -> bool {
        let zero = BigInt::from(0);
        self.unit == zero && self.nu == zero
    }

    fn __repr__(&self) -> String {
        format!(
            "GammaElement({} + {}*nu mod 2^{})",
            self.unit, self.nu, self.modulus_exponent
        )
    }
}

fn wrap_gamma(e: gamma::GammaRingElement) -> GammaElement {
    GammaElement {
        unit: e.unit_part().clone(),
        nu: BigInt::from(e.nu_part().clone()),
        modulus_exponent: e.modulus_exponent(),
    }
}

/// `nu^i` reduced in `R_c`.
#[pyfunction]
fn nu_power(i: u64, c: u32) -> PyResult<GammaElement> {
    gamma::nu_power(i, c).map(wrap_gamma).map_err(value_error)
}

/// Coefficients of `(1 + t*nu)^{-r}` for `t^0 ..= t^depth` in `R_c`.
#[pyfunction]
fn inverse_series(r: u64, depth: u64, c: u32) -> PyResult<Vec<GammaElement>> {
    Ok(gamma::inverse_series(r, depth, c)
        .map_err(value_error)?
        .into_iter()
        .map(wrap_gamma)
        .collect())
}

#[pyclass(get_all, frozen)]
struct GammaConstraint {
    i: u64,
    modulus_exponent: u64,
    coefficient_valuation: u64,
    satisfied: bool,
}

#[pymethods]
impl GammaConstraint {
    fn __repr__(&self) -> String {
        format!(
            "GammaConstraint(i={}, v2=2^{} needed 2^{}, satisfied={})",
            self.i, self.coefficient_valuation, self.modulus_exponent, self.satisfied
        )
    }
}

#[pyfunction]
fn divisibility_constraints(r: u64, s: u64, n: u64) -> PyResult<Vec<GammaConstraint>> {
    if r == 0 || s == 0 || n == 0 {
        return Err(PyValueError::new_err("triple components must be positive"));
    }
    Ok(gamma::divisibility_constraints(r, s, n)
        .into_iter()
        .map(|rec| GammaConstraint {
            i: rec.i,
            modulus_exponent: rec.modulus_exponent,
            coefficient_valuation: rec.coefficient_valuation,
            satisfied: rec.satisfied,
        })
        .collect())
}

#[pyfunction]
fn obstruction_check(r: u64, s: u64, n: u64) -> PyResult<bool> {
    if r == 0 || s == 0 || n == 0 {
        return Err(PyValueError::new_err("triple components must be positive"));
    }
    Ok(gamma::obstruction_check(r, s, n))
}

/// Coefficients of the Koszul class `prod (1 - (1-t)^{d})` in
/// `Z[t]/(t^{order+1})`, low degree first.
#[pyfunction]
fn koszul_class(degrees: Vec<u64>, order: usize) -> PyResult<Vec<BigInt>> {
    Ok(grothendieck::koszul_class(&degrees, order)
        .map_err(value_error)?
        .coeffs()
        .to_vec())
}

/// Additive invariants and relations of K0 of a deleted quadric.
#[pyclass(get_all, frozen)]
struct Presentation {
    n: usize,
    group: String,
    free_rank: usize,
    torsion: Vec<BigInt>,
    torsion_exponent: u64,
    relation_t_squared_equals_two_t: bool,
}

#[pymethods]
impl Presentation {
    fn __repr__(&self) -> String {
        format!("Presentation(K0(DQ_{}) = {})", self.n, self.group)
    }
}

#[pyfunction]
fn deleted_quadric_k0(n: usize) -> PyResult<Presentation> {
    let pres = grothendieck::deleted_quadric_k0(n).map_err(value_error)?;
    Ok(Presentation {
        n,
        group: pres.group_string(),
        free_rank: pres.free_rank(),
        torsion: pres.torsion_factors(),
        torsion_exponent: pres.torsion_exponent(),
        relation_t_squared_equals_two_t: pres.relation_t_squared_equals_two_t(),
    })
}

/// Verification report for one formula document.
#[pyclass(get_all, frozen)]
struct FormulaReport {
    r: usize,
    s: usize,
    n: usize,
    field: String,
    verified: bool,
    orthogonality: bool,
    consistency: String,
}

#[pymethods]
impl FormulaReport {
    fn __repr__(&self) -> String {
        format!(
            "FormulaReport([{},{},{}] over {}, verified={})",
            self.r, self.s, self.n, self.field, self.verified
        )
    }
}

fn report_for(formula: &SosFormula) -> FormulaReport {
    let consistency = match formula.admissibility_consistency() {
        ConsistencyReport::NotVerified => "not-verified",
        ConsistencyReport::Char2Exempt => "char2-exempt",
        ConsistencyReport::Consistent(_) => "consistent",
        ConsistencyReport::Inconsistent(_) => "inconsistent",
    };
    FormulaReport {
        r: formula.r(),
        s: formula.s(),
        n: formula.n(),
        field: formula.field().to_string(),
        verified: formula.verify(),
        orthogonality: formula.orthogonality_check(),
        consistency: consistency.to_string(),
    }
}

#[pyfunction]
fn verify_formula_file(path: &str) -> PyResult<FormulaReport> {
    let formula = SosFormula::from_path(path).map_err(value_error)?;
    Ok(report_for(&formula))
}

#[pyfunction]
fn verify_formula_json(text: &str) -> PyResult<FormulaReport> {
    let formula = SosFormula::from_json_str(text).map_err(value_error)?;
    Ok(report_for(&formula))
}

#[pymodule]
fn sumsq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(two_adic_valuation, m)?)?;
    m.add_function(wrap_pyfunction!(kummer_valuation, m)?)?;
    m.add_function(wrap_pyfunction!(pascal_express, m)?)?;
    m.add_function(wrap_pyfunction!(divisibility_set_equiv, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(check_shifted, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_admissible_n, m)?)?;
    m.add_function(wrap_pyfunction!(admissibility_table, m)?)?;
    m.add_function(wrap_pyfunction!(nu_power, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_series, m)?)?;
    m.add_function(wrap_pyfunction!(divisibility_constraints, m)?)?;
    m.add_function(wrap_pyfunction!(obstruction_check, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_class, m)?)?;
    m.add_function(wrap_pyfunction!(deleted_quadric_k0, m)?)?;
    m.add_function(wrap_pyfunction!(verify_formula_file, m)?)?;
    m.add_function(wrap_pyfunction!(verify_formula_json, m)?)?;
    m.add_class::<Constraint>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<GammaElement>()?;
    m.add_class::<GammaConstraint>()?;
    m.add_class::<Presentation>()?;
    m.add_class::<FormulaReport>()?;
    Ok(())
}
