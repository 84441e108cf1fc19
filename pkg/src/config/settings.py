import os
import logging
from pathlib import Path

from dotenv import load_dotenv

# Определяем корневую директорию проекта
BASE_DIR = Path(__file__).parent.parent.parent

# Загружаем .env файл если он существует
env_path = BASE_DIR / '.env'
if env_path.exists():
    load_dotenv(env_path, override=False)

# Настройки логирования
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("LOG_FILE", "")

logging.basicConfig(
    level=LOG_LEVEL,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=[
        logging.StreamHandler(), # Вывод в консоль (stderr)
        logging.FileHandler(LOG_FILE) if LOG_FILE else logging.NullHandler() # Вывод в файл, если указан
    ]
)

logging.getLogger().setLevel(LOG_LEVEL)

# Основные настройки
DEBUG = os.getenv("DEBUG", "False").lower() in ("true", "1", "yes")
VERSION = "1.0.0"

# Количество рабочих потоков по умолчанию для сканирования по t
ZETA_THREADS = max(1, int(os.getenv("ZETA_THREADS", "1")))

# Специальные функции
BERNOULLI_MAX = int(os.getenv("BERNOULLI_MAX", "200"))

# Движок сумм Дирихле
EXTENDED_PHASE_MIN_T = float(os.getenv("EXTENDED_PHASE_MIN_T", "1e4"))  # выше этого |t| фаза считается в double-double
ZETA_ORACLE_EPS = float(os.getenv("ZETA_ORACLE_EPS", "1e-12"))
ZETA_ORACLE_MAX_TERMS = int(os.getenv("ZETA_ORACLE_MAX_TERMS", str(2 ** 22)))
ZETA_ORACLE_MAX_T = 1e4
MAX_TERMS = 2 ** 20

# Наблюдаемые и поиск нулей
REFERENCE_Z_MAX_T = float(os.getenv("REFERENCE_Z_MAX_T", "100"))
SCAN_STEP_FRACTION = float(os.getenv("SCAN_STEP_FRACTION", "0.05"))
L_MINIMA_THRESHOLD_FACTOR = float(os.getenv("L_MINIMA_THRESHOLD_FACTOR", "3.0"))
L_MINIMA_REFINE_TOL = float(os.getenv("L_MINIMA_REFINE_TOL", "1e-4"))  # доля шага сетки

# Эмуляция схем
LOG_ORACLE_N_MAX = int(os.getenv("LOG_ORACLE_N_MAX", str(2 ** 20)))
MAX_TRUNCATED_K = 20

# Настройки кэширования таблиц
TABLE_CACHE_MAX_ITEMS = int(os.getenv("TABLE_CACHE_MAX_ITEMS", "64"))
TABLE_CACHE_MAX_BYTES = int(os.getenv("TABLE_CACHE_MAX_BYTES", str(256 * 2 ** 20)))

# Соглашение о константах O(.) в оценках ресурсов
O_CONSTANTS = "unit"

if DEBUG:
    logging.debug(
        f"Настройки загружены: threads={ZETA_THREADS}, bernoulli_max={BERNOULLI_MAX}, "
        f"extended_phase_min_t={EXTENDED_PHASE_MIN_T}"
    )
