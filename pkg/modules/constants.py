"""
数値定数の定義
許容誤差・ソルバー既定値・入出力スキーマ
"""

# 対称性・パターン判定（構成値なので絶対誤差で比較）
SYMMETRY_ATOL = 1e-12  # 置換スキャンの許容誤差
PATTERN_ZERO_TOL = 1e-12  # 十分条件の「=0」判定
WITNESS_TOL = 1e-12  # 反例ベクトルの評価値がこれ未満なら NOT_PSD

# 判定マージン
DEFAULT_MARGIN = 1e-8  # PD には下界 > margin が必要

# 固有値ソルバー
DEFAULT_STARTS = 32  # ランダム初期点の数（基底ベクトルは別枠）
DEFAULT_MAX_ITER = 5000
DEFAULT_TOL = 1e-10  # 残差ノルムの収束判定
DEFAULT_SEED = 0
GEAP_TAU = 1e-6  # 適応シフトの凸性余裕
TIE_RTOL = 1e-12  # マルチスタートの同値判定

# 列挙の上限
EXTREME_POINT_CAP = 2 ** 20

# 球面オラクル
DEFAULT_RESOLUTION = 200
SPHERE_ORACLE_TOL = 1e-6  # 格子最小値の符号を決める幅

# JSON スキーマ
SCHEMA_VERSION = 1
SEED_ENV_VAR = "ITC_SEED"

# 終了コード
EXIT_HOLDS = 0
EXIT_REFUTED = 1
EXIT_UNKNOWN = 2
EXIT_INPUT_ERROR = 64
