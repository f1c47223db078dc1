# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cython time stepper for the coupled parametric mode system.

Same contract as vpl._stepper_py.evolve_batch; see there for the scheme
(exact free rotations + rank-one coupling kicks, Yoshida 4th order).
"""
import numpy as np

from libc.math cimport M_PI, cos, fabs, sin

COMPILED = True

cdef double W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
cdef double W0 = 1.0 - 2.0 * W1


cdef inline double _drive(double t, double coupling, double freq,
                          double ramp) noexcept nogil:
    cdef double env
    if t <= 0.0:
        env = 0.0
    elif ramp > 0.0 and t < ramp:
        env = 0.5 * (1.0 - cos(M_PI * t / ramp))
    else:
        env = 1.0
    return coupling * env * cos(freq * t)


cdef void _kick(double s, double[::1] omega, double complex[:, ::1] a,
                double complex[:, ::1] p, double complex[::1] lam) noexcept nogil:
    cdef Py_ssize_t K = a.shape[0], M = a.shape[1], k, m
    cdef double wk
    if s == 0.0:
        return
    for m in range(M):
        lam[m] = 0.0
    for k in range(K):
        wk = omega[k]
        for m in range(M):
            lam[m] = lam[m] + wk * a[k, m]
    for k in range(K):
        wk = s * omega[k]
        for m in range(M):
            p[k, m] = p[k, m] + wk * lam[m]


cdef void _rotate(double[::1] cosv, double[::1] sin_over, double[::1] sin_times,
                  double complex[:, ::1] a, double complex[:, ::1] p) noexcept nogil:
    cdef Py_ssize_t K = a.shape[0], M = a.shape[1], k, m
    cdef double c, so, st
    cdef double complex ak, pk
    for k in range(K):
        c = cosv[k]
        so = sin_over[k]
        st = sin_times[k]
        for m in range(M):
            ak = a[k, m]
            pk = p[k, m]
            a[k, m] = ak * c + pk * so
            p[k, m] = pk * c - ak * st


cdef bint _guard_tripped(double complex[:, ::1] a, double guard) noexcept nogil:
    cdef Py_ssize_t k, m
    cdef double re, im
    for k in range(a.shape[0]):
        for m in range(a.shape[1]):
            re = a[k, m].real
            im = a[k, m].imag
            if not (fabs(re) <= guard and fabs(im) <= guard):
                return True
    return False


def evolve_batch(omega, double coupling, double drive_freq, double ramp_time,
                 double dt, long n_steps, double t0, a, p, double guard=1e12,
                 long check_every=64):
    """Advance (a, p) in place by n_steps of size dt starting at t0.

    Returns -1 on success, or the index of the step at which the amplitude
    guard tripped.  dt may be negative (time-reversed integration).
    """
    cdef double[::1] w = np.ascontiguousarray(omega, dtype=np.float64)
    cdef double complex[:, ::1] av = a
    cdef double complex[:, ::1] pv = p
    cdef Py_ssize_t K = av.shape[0]
    cdef double complex[::1] lam = np.empty(K, dtype=np.complex128)

    om = np.asarray(omega, dtype=np.float64)
    c1 = np.cos(om * (W1 * dt)); s1 = np.sin(om * (W1 * dt))
    c0 = np.cos(om * (W0 * dt)); s0 = np.sin(om * (W0 * dt))
    cdef double[::1] cos1 = np.ascontiguousarray(c1)
    cdef double[::1] sov1 = np.ascontiguousarray(s1 / om)
    cdef double[::1] sti1 = np.ascontiguousarray(s1 * om)
    cdef double[::1] cos0 = np.ascontiguousarray(c0)
    cdef double[::1] sov0 = np.ascontiguousarray(s0 / om)
    cdef double[::1] sti0 = np.ascontiguousarray(s0 * om)

    cdef double h1 = W1 * dt, h0 = W0 * dt
    cdef double t, ts
    cdef long step
    cdef long failed = -1

    with nogil:
        for step in range(n_steps):
            t = t0 + step * dt
            # Strang(h1) o Strang(h0) o Strang(h1)
            ts = t
            _kick(0.5 * h1 * _drive(ts, coupling, drive_freq, ramp_time), w, av, pv, lam)
            _rotate(cos1, sov1, sti1, av, pv)
            _kick(0.5 * h1 * _drive(ts + h1, coupling, drive_freq, ramp_time), w, av, pv, lam)
            ts = t + h1
            _kick(0.5 * h0 * _drive(ts, coupling, drive_freq, ramp_time), w, av, pv, lam)
            _rotate(cos0, sov0, sti0, av, pv)
            _kick(0.5 * h0 * _drive(ts + h0, coupling, drive_freq, ramp_time), w, av, pv, lam)
            ts = t + h1 + h0
            _kick(0.5 * h1 * _drive(ts, coupling, drive_freq, ramp_time), w, av, pv, lam)
            _rotate(cos1, sov1, sti1, av, pv)
            _kick(0.5 * h1 * _drive(ts + h1, coupling, drive_freq, ramp_time), w, av, pv, lam)
            if (step + 1) % check_every == 0 and _guard_tripped(av, guard):
                failed = step
                break
    if failed >= 0:
        return failed
    if _guard_tripped(av, guard):
        return n_steps - 1
    return -1
