"""
Модуль конфигурации для проекта zeta-dqpt.
Содержит настройки численного движка, эмуляции схем и CLI.
"""

# Импортируем настройки из файла settings.py
from .settings import *
