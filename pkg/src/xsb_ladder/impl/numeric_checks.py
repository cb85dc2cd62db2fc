"""
浮点数值校验

验证 Dirac 矩阵恒等式、投影算子演算、零形式核的角度界、角度引理以及调制权重的可比性。
所有采样器都使用带种子的 numpy Generator，相同种子给出相同的最大值。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .reduction_engine import AngleParams

logger = logging.getLogger(__name__)

# θ ≤ π·2^{1/4}·RHS(1/2, 1/2, 1/2) 给出的常数，向上取整
ANGLE_LEMMA_CONSTANT = 4.0
ZERO_CUTOFF = 1e-14
# 夹角小于此值的样本不计入核范数与夹角之比；这些样本由偏差 |‖K‖ - sin(θ/2)| 与 sin(θ/2) ≤ θ/2 覆盖
RATIO_CUTOFF = 1e-6
# 向量化采样的分块大小
CHUNK = 100_000


@dataclass(frozen=True)
class Frequency:
    """频率：空间分量 ξ ∈ ℝ²，可选的时间分量 τ"""

    xi: Tuple[float, float]
    tau: Optional[float] = None

    @property
    def spatial(self) -> np.ndarray:
        return np.asarray(self.xi, dtype=float)

    @property
    def norm(self) -> float:
        return float(np.hypot(*self.xi))

    def signed(self, sign: int) -> "Frequency":
        return Frequency((sign * self.xi[0], sign * self.xi[1]), self.tau)


VectorLike = Union[Frequency, Sequence[float], np.ndarray]


def _spatial(x: VectorLike) -> np.ndarray:
    if isinstance(x, Frequency):
        return x.spatial
    return np.asarray(x, dtype=float)


def _require_nonzero(*vectors: np.ndarray) -> None:
    for v in vectors:
        if not np.any(v):
            raise ValueError("空间频率不能为零向量")


@dataclass(frozen=True, eq=False)
class DiracMatrices:
    """二维 Dirac 矩阵 α¹、α²、β 的标准表示"""

    alpha1: np.ndarray = field(default_factory=lambda: np.array([[0, 1], [1, 0]], dtype=complex))
    alpha2: np.ndarray = field(default_factory=lambda: np.array([[0, -1j], [1j, 0]], dtype=complex))
    beta: np.ndarray = field(default_factory=lambda: np.array([[1, 0], [0, -1]], dtype=complex))

    TOLERANCE = 1e-12

    def alpha_dot(self, x: np.ndarray) -> np.ndarray:
        """α·x，x 可以是形如 (..., 2) 的批量"""
        x = np.asarray(x, dtype=float)
        return x[..., 0, None, None] * self.alpha1 + x[..., 1, None, None] * self.alpha2

    def identity_residuals(self) -> Dict[str, float]:
        """各恒等式的最大残差：厄米性、平方为单位阵、反交换"""
        identity = np.eye(2)
        residuals = {
            "beta_hermitian": np.abs(self.beta.conj().T - self.beta).max(),
            "beta_square": np.abs(self.beta @ self.beta - identity).max(),
        }
        for name, alpha in (("alpha1", self.alpha1), ("alpha2", self.alpha2)):
            residuals[f"{name}_hermitian"] = np.abs(alpha.conj().T - alpha).max()
            residuals[f"{name}_square"] = np.abs(alpha @ alpha - identity).max()
            residuals[f"{name}_beta_anticommute"] = np.abs(alpha @ self.beta + self.beta @ alpha).max()
        residuals["alpha_anticommute"] = np.abs(self.alpha1 @ self.alpha2 + self.alpha2 @ self.alpha1).max()
        return {k: float(v) for k, v in residuals.items()}


DIRAC = DiracMatrices()


def _angles(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    cross = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    dot = u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]
    return np.arctan2(np.abs(cross), dot)


def angle_between(x: VectorLike, y: VectorLike) -> float:
    """
    两个非零平面向量之间的夹角，取值于 [0, π]

    Raises:
        ValueError: 存在零向量
    """
    u, v = _spatial(x), _spatial(y)
    _require_nonzero(u, v)
    return float(_angles(u, v))


def _projections(x: np.ndarray, sign: np.ndarray) -> np.ndarray:
    unit = x / np.hypot(x[..., 0], x[..., 1])[..., None]
    sign = np.asarray(sign, dtype=float)
    return 0.5 * (np.eye(2) + sign[..., None, None] * DIRAC.alpha_dot(unit))


def dirac_projection(x: VectorLike, sign: int) -> np.ndarray:
    """
    Dirac 投影 P±(ξ) = (I ± ξ̂·α)/2

    Raises:
        ValueError: 零向量，或 sign 不是 ±1
    """
    v = _spatial(x)
    _require_nonzero(v)
    if sign not in (1, -1):
        raise ValueError(f"符号必须是 +1 或 -1，当前为 {sign}")
    return _projections(v, np.asarray(sign))


def operator_norm_2x2(matrix: np.ndarray) -> np.ndarray:
    """2×2 矩阵的算子范数（最大奇异值），用闭式公式，支持批量"""
    m = np.asarray(matrix, dtype=complex)
    frobenius = np.sum(np.abs(m) ** 2, axis=(-2, -1))
    det = np.abs(m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0])
    discriminant = np.maximum(frobenius ** 2 - 4 * det ** 2, 0.0)
    return np.sqrt((frobenius + np.sqrt(discriminant)) / 2)


def nullform_kernel_norm(eta: VectorLike, zeta: VectorLike, s1: int, s2: int) -> float:
    """‖P_{±2}(ζ) β P_{±1}(η)‖"""
    kernel = dirac_projection(zeta, s2) @ DIRAC.beta @ dirac_projection(eta, s1)
    return float(operator_norm_2x2(kernel))


def symbol_bound_ratio(eta: VectorLike, zeta: VectorLike, s1: int, s2: int) -> float:
    """
    ‖P_{±2}(ζ) β P_{±1}(η)‖ / θ(±1η, ±2ζ)

    分子与夹角都小于 1e-14 时按约定返回 0。

    Raises:
        ValueError: 零向量，或夹角为零而分子不为零
    """
    u, v = _spatial(eta), _spatial(zeta)
    norm = nullform_kernel_norm(u, v, s1, s2)
    theta = angle_between(s1 * u, s2 * v)
    if theta < ZERO_CUTOFF:
        if norm < ZERO_CUTOFF:
            return 0.0
        raise ValueError(f"夹角为零而核范数为 {norm}")
    return norm / theta


class ProjectionReport(NamedTuple):
    idempotent: float
    orthogonal: float
    complete: float
    beta_intertwine: float
    alpha_decomposition: float

    def max_residual(self) -> float:
        return max(self)


def _directions(rng: np.random.Generator, size: int) -> np.ndarray:
    angle = rng.uniform(0, 2 * np.pi, size)
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def _log_radii(rng: np.random.Generator, size: int, low: float = -3, high: float = 6) -> np.ndarray:
    return 10.0 ** rng.uniform(low, high, size)


def check_projection_calculus(n: int, seed: int = 0) -> ProjectionReport:
    """
    在 n 个随机非零频率上检查 P±² = P±、P±P∓ = 0、P+ + P- = I、P±β = βP∓ 以及
    α·x = |x|P+(x) - |x|P-(x)，返回每条恒等式的最大残差
    """
    rng = np.random.default_rng(seed)
    x = _directions(rng, n) * _log_radii(rng, n)[:, None]
    plus = _projections(x, np.ones(n))
    minus = _projections(x, -np.ones(n))
    identity = np.eye(2)
    beta = DIRAC.beta
    radius = np.hypot(x[:, 0], x[:, 1])[:, None, None]

    def worst(residual: np.ndarray) -> float:
        return float(np.abs(residual).max()) if residual.size else 0.0

    alpha_x = DIRAC.alpha_dot(x)
    return ProjectionReport(
        idempotent=max(worst(plus @ plus - plus), worst(minus @ minus - minus)),
        orthogonal=max(worst(plus @ minus), worst(minus @ plus)),
        complete=worst(plus + minus - identity),
        beta_intertwine=max(worst(plus @ beta - beta @ minus), worst(minus @ beta - beta @ plus)),
        # 按 |x| 归一化，使残差与半径无关
        alpha_decomposition=worst((alpha_x - radius * plus + radius * minus) / radius),
    )


class KernelReport(NamedTuple):
    samples: int
    max_deviation: float
    max_ratio: float


def _signs(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.choice(np.array([-1.0, 1.0]), size)


def _paired_directions(rng: np.random.Generator, first: np.ndarray) -> np.ndarray:
    """第二个方向：一半均匀，四分之一近平行，四分之一近反平行"""
    size = len(first)
    base = np.arctan2(first[:, 1], first[:, 0])
    offset = _signs(rng, size) * 10.0 ** rng.uniform(-8, -1, size)
    kind = rng.integers(0, 4, size)
    angle = np.where(kind < 2, rng.uniform(0, 2 * np.pi, size),
                     np.where(kind == 2, base + offset, base + np.pi + offset))
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


def sample_nullform_kernel(n: int, seed: int = 0) -> KernelReport:
    """
    采样验证 ‖P_{±2}(ζ)βP_{±1}(η)‖ = sin(θ(±1η, ±2ζ)/2)

    偏差在全部样本上计算。近平行时 ‖K‖ 与 θ 都约为 1e-8 量级，舍入误差会使比值略超过 1/2，
    因此比值只在 θ ≥ RATIO_CUTOFF 的样本上计算。

    Returns:
        样本数、与 sin(θ/2) 的最大偏差、以及核范数与夹角之比的最大值
    """
    rng = np.random.default_rng(seed)
    max_deviation, max_ratio = 0.0, 0.0
    done = 0
    while done < n:
        size = min(CHUNK, n - done)
        first = _directions(rng, size)
        eta = first * _log_radii(rng, size)[:, None]
        zeta = _paired_directions(rng, first) * _log_radii(rng, size)[:, None]
        s1, s2 = _signs(rng, size), _signs(rng, size)
        kernel = _projections(zeta, s2) @ DIRAC.beta @ _projections(eta, s1)
        norm = operator_norm_2x2(kernel)
        theta = _angles(s1[:, None] * eta, s2[:, None] * zeta)
        max_deviation = max(max_deviation, float(np.abs(norm - np.sin(theta / 2)).max()))
        usable = theta >= RATIO_CUTOFF
        if np.any(usable):
            max_ratio = max(max_ratio, float((norm[usable] / theta[usable]).max()))
        done += size
    logger.debug("零形式核采样 %d 次: 最大偏差 %.3e, 最大比值 %.6f", n, max_deviation, max_ratio)
    return KernelReport(n, max_deviation, max_ratio)


def _bracket(x: np.ndarray) -> np.ndarray:
    """⟨x⟩ = (1 + |x|²)^{1/2}"""
    return np.hypot(1.0, x)


def _as_floats(params: Union[AngleParams, Sequence[float]]) -> Tuple[float, float, float]:
    if isinstance(params, AngleParams):
        return tuple(float(x) for x in params.as_tuple())
    a, b, c = params
    return float(a), float(b), float(c)


def sample_angle_lemma(n: int, params: Union[AngleParams, Sequence[float]],
                       constant: float = ANGLE_LEMMA_CONSTANT, seed: int = 0) -> float:
    """
    采样检验角度估计 θ(±1η, ±2ζ) ≤ C·RHS(a, b, c)

    频率半径在 [1e-3, 1e6] 上对数均匀，方向混合均匀、近平行与近反平行三类；
    时间频率一半取重尾偏移，一半贴近特征锥 λ ≈ ∓1|η|。

    Args:
        n: 样本数
        params: 角度参数 (a, b, c)，ε 按 0 处理
        constant: 常数 C
        seed: 随机种子

    Returns:
        max θ / (C·RHS)；不超过 1 表示在常数 C 下没有反例
    """
    if n < 1:
        raise ValueError("样本数必须 ≥ 1")
    if constant <= 0:
        raise ValueError("常数 C 必须为正")
    a, b, c = _as_floats(params)
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < n:
        size = min(CHUNK, n - done)
        first = _directions(rng, size)
        eta_radius, zeta_radius = _log_radii(rng, size), _log_radii(rng, size)
        eta = first * eta_radius[:, None]
        zeta = _paired_directions(rng, first) * zeta_radius[:, None]
        s1, s2 = _signs(rng, size), _signs(rng, size)

        def modulation_offsets() -> np.ndarray:
            near_cone = rng.random(size) < 0.5
            return _signs(rng, size) * np.where(near_cone, 10.0 ** rng.uniform(-6, 0, size),
                                                _log_radii(rng, size))

        lam = -s1 * eta_radius + modulation_offsets()
        mu = -s2 * zeta_radius + modulation_offsets()
        theta = _angles(s1[:, None] * eta, s2[:, None] * zeta)

        low = np.minimum(_bracket(eta_radius), _bracket(zeta_radius))
        difference = np.hypot(eta[:, 0] - zeta[:, 0], eta[:, 1] - zeta[:, 1])
        rhs = ((_bracket(np.abs(lam - mu) - difference) / low) ** a
               + (_bracket(lam + s1 * eta_radius) / low) ** b
               + (_bracket(mu + s2 * zeta_radius) / low) ** c)
        worst = max(worst, float((theta / (constant * rhs)).max()))
        done += size
    logger.debug("角度估计采样 %d 次, 参数 (%s, %s, %s), C=%s: 最大比值 %.6f", n, a, b, c, constant, worst)
    return worst


def weight_comparability(m: float, n: int, seed: int = 0) -> float:
    """
    采样 max(⟨τ±|ξ|⟩/⟨τ±⟨ξ⟩_m⟩, 倒数)，理论上不超过 1 + m

    Raises:
        ValueError: m 为负
    """
    if m < 0:
        raise ValueError("质量 m 必须非负")
    rng = np.random.default_rng(seed)
    worst = 1.0
    done = 0
    while done < n:
        size = min(CHUNK, n - done)
        radius = _log_radii(rng, size)
        sign = _signs(rng, size)
        near_cone = rng.random(size) < 0.5
        tau = -sign * radius + _signs(rng, size) * np.where(
            near_cone, 10.0 ** rng.uniform(-6, 1, size), _log_radii(rng, size))
        massive = np.hypot(m, radius)
        ratio = _bracket(tau + sign * radius) / _bracket(tau + sign * massive)
        worst = max(worst, float(np.maximum(ratio, 1.0 / ratio).max()))
        done += size
    return worst
