import asyncio
import functools
import logging
import signal
import sys

from src.cli.config_parser import parse_config
from src.cli.runner import EXIT_USAGE, run_async
from src.config import settings
from src.core.errors import UsageError


def handle_shutdown_signal(sig, loop):
    """Обработчик сигналов для корректного завершения работы."""
    logging.info(f"Получен сигнал завершения: {sig}")
    for task in asyncio.all_tasks(loop=loop):
        if task is not asyncio.current_task(loop=loop):
            task.cancel()


async def main(argv) -> int:
    """Точка входа: разбор конфигурации и выполнение команды."""
    try:
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, functools.partial(handle_shutdown_signal, sig, loop))
            except NotImplementedError:
                # Windows не поддерживает add_signal_handler
                logging.debug(f"Обработчик сигнала {sig} не зарегистрирован - не поддерживается платформой")
    except Exception as e:
        logging.warning(f"Не удалось настроить обработчики сигналов: {e}")

    try:
        config = parse_config(argv)
    except UsageError as e:
        logging.error(f"Ошибка конфигурации: {e}")
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE

    logging.info(f"Запуск zeta-dqpt v{settings.VERSION}: {config.command.value}")
    task = asyncio.create_task(run_async(config), name="command_task")
    try:
        return await task
    except asyncio.CancelledError:
        logging.warning("Выполнение команды прервано")
        return 130


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main(sys.argv[1:])))
    except KeyboardInterrupt:
        logging.info("Принудительное завершение работы")
        sys.exit(130)
