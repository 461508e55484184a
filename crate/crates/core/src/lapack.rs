//! Thin safe wrappers over the two LAPACK drivers the crate needs.

use std::os::raw::{c_char, c_int};

use lapack_sys::__BindgenComplex as LapackComplex;
use ndarray::{Array2, ShapeBuilder};

use crate::error::{Error, Result};
use crate::C64;

fn fortran_copy(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let mut m = Array2::<C64>::zeros((n, n).f());
    m.assign(a);
    m
}

fn as_lapack(p: *mut C64) -> *mut LapackComplex<f64> {
    // Complex<f64> is #[repr(C)] { re, im }, identical to the bindgen struct.
    p.cast()
}

fn dim_i32(n: usize) -> Result<c_int> {
    c_int::try_from(n).map_err(|_| Error::BadDimension(n))
}

/// Divide-and-conquer Hermitian eigensolver (`zheevd`), lower triangle.
/// Returns ascending eigenvalues and the eigenvectors as columns.
pub(crate) fn zheevd(a: &Array2<C64>) -> Result<(Vec<f64>, Array2<C64>)> {
    let n = a.nrows();
    let mut m = fortran_copy(a);
    let ni = dim_i32(n)?;
    let jobz = b'V' as c_char;
    let uplo = b'L' as c_char;
    let mut w = vec![0.0f64; n];
    let mut info: c_int = 0;

    let mut work_q = [C64::new(0.0, 0.0)];
    let mut rwork_q = [0.0f64];
    let mut iwork_q: [c_int; 1] = [0];
    let query: c_int = -1;
    unsafe {
        lapack_sys::zheevd_(
            &jobz,
            &uplo,
            &ni,
            as_lapack(m.as_mut_ptr()),
            &ni,
            w.as_mut_ptr(),
            as_lapack(work_q.as_mut_ptr()),
            &query,
            rwork_q.as_mut_ptr(),
            &query,
            iwork_q.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zheevd", info });
    }
    let lwork = (work_q[0].re as c_int).max(1);
    let lrwork = (rwork_q[0] as c_int).max(1);
    let liwork = iwork_q[0].max(1);
    let mut work = vec![C64::new(0.0, 0.0); lwork as usize];
    let mut rwork = vec![0.0f64; lrwork as usize];
    let mut iwork = vec![0 as c_int; liwork as usize];
    unsafe {
        lapack_sys::zheevd_(
            &jobz,
            &uplo,
            &ni,
            as_lapack(m.as_mut_ptr()),
            &ni,
            w.as_mut_ptr(),
            as_lapack(work.as_mut_ptr()),
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zheevd", info });
    }
    Ok((w, m))
}

/// Complex Schur decomposition `A = Z T Z†` (`zgees`, no reordering).
/// Returns the diagonal of `T`, the strictly-upper part's largest modulus,
/// and the Schur vectors `Z`.
pub(crate) fn zgees(a: &Array2<C64>) -> Result<(Vec<C64>, f64, Array2<C64>)> {
    let n = a.nrows();
    let mut t = fortran_copy(a);
    let ni = dim_i32(n)?;
    let jobvs = b'V' as c_char;
    let sort = b'N' as c_char;
    let mut sdim: c_int = 0;
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut vs = Array2::<C64>::zeros((n, n).f());
    let mut rwork = vec![0.0f64; n.max(1)];
    let mut bwork: Vec<c_int> = vec![0; n.max(1)];
    let mut info: c_int = 0;

    let mut work_q = [C64::new(0.0, 0.0)];
    let query: c_int = -1;
    unsafe {
        lapack_sys::zgees_(
            &jobvs,
            &sort,
            None,
            &ni,
            as_lapack(t.as_mut_ptr()),
            &ni,
            &mut sdim,
            as_lapack(w.as_mut_ptr()),
            as_lapack(vs.as_mut_ptr()),
            &ni,
            as_lapack(work_q.as_mut_ptr()),
            &query,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgees", info });
    }
    let lwork = (work_q[0].re as c_int).max(1);
    let mut work = vec![C64::new(0.0, 0.0); lwork as usize];
    unsafe {
        lapack_sys::zgees_(
            &jobvs,
            &sort,
            None,
            &ni,
            as_lapack(t.as_mut_ptr()),
            &ni,
            &mut sdim,
            as_lapack(w.as_mut_ptr()),
            as_lapack(vs.as_mut_ptr()),
            &ni,
            as_lapack(work.as_mut_ptr()),
            &lwork,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgees", info });
    }
    let mut off = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            off = off.max(t[[i, j]].norm());
        }
    }
    Ok((w, off, vs))
}
