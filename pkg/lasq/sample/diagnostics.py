import numpy as np

from lasq.errors import InvalidInputError


def autocorrelation(samples):
    '''
        Normalised autocorrelation function of a 1D chain, evaluated with a
        zero-padded FFT
    '''

    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or len(x) < 2:
        raise InvalidInputError('Autocorrelation needs a 1D chain of at least 2 states')

    n = len(x)
    x = x - x.mean()

    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(x, size)
    acf = np.fft.irfft(spectrum * np.conjugate(spectrum), size)[:n]

    if acf[0] == 0:
        # a constant chain carries no correlation structure
        out = np.zeros(n)
        out[0] = 1.0
        return out

    return acf / acf[0]


def integrated_autocorr_time(samples, window_c=5.0):
    '''
        tau_int = 1 + 2 sum_k rho(k), truncated at the first lag M >= c tau(M)
    '''

    rho = autocorrelation(samples)

    tau = 2.0 * np.cumsum(rho) - 1.0
    lags = np.arange(len(tau))

    within = lags < window_c * tau
    if np.all(within):
        return float(tau[-1])

    return float(max(tau[np.argmin(within)], 1.0))


def ks_statistic(samples, cdf):
    '''
        Kolmogorov-Smirnov distance between the empirical CDF and cdf
    '''

    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = len(x)
    if n == 0:
        raise InvalidInputError('KS statistic needs at least one sample')

    f = np.asarray(cdf(x), dtype=np.float64)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(n) / n

    return float(max(upper.max(), lower.max()))


def ks_critical_value(n, alpha=0.01):
    '''
        Asymptotic Kolmogorov critical value sqrt(-ln(alpha / 2) / 2) / sqrt(n)
    '''

    if not 0 < alpha < 1:
        raise InvalidInputError('Significance level (%s) must lie in (0, 1)' % alpha)
    if not n > 0:
        raise InvalidInputError('Sample size (%s) must be positive' % n)

    return float(np.sqrt(-np.log(alpha / 2.0) / 2.0) / np.sqrt(n))


def effective_sample_size(samples):
    return len(samples) / integrated_autocorr_time(samples)
