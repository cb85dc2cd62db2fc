import logging
import os
from typing import Any, Dict, Optional, Tuple

from .exceptions import CacheError
from .ladder_model import Ladder

logger = logging.getLogger(__name__)

ENCODINGS = ('utf-8', 'gb2312', 'gbk', 'big5')


def decode_source(data: bytes) -> str:
    """依次尝试常见编码解码脚本内容"""
    for encoding in ENCODINGS:
        try:
            return data.decode(encoding)
        except UnicodeDecodeError:
            continue
    return data.decode('utf-8', errors='replace')


def file_signature(path: str) -> Tuple[int, int]:
    """文件的 (纳秒修改时间, 字节数)"""
    stat = os.stat(path)
    return stat.st_mtime_ns, stat.st_size


class CacheManager:
    """缓存管理器，按路径、修改时间和文件大小缓存解析后的证明脚本"""

    def __init__(self):
        # 缓存结构: {path: {"signature": (mtime_ns, size), "ladder": Ladder}}
        self._cache: Dict[str, Dict[str, Any]] = {}

    def get_ladder(self, path: str) -> Optional[Ladder]:
        """
        获取文件的缓存脚本

        Args:
            path: 文件路径

        Returns:
            缓存的脚本，不存在或文件已修改时返回None
        """
        if self.is_cache_valid(path):
            logger.debug("缓存命中: %s", path)
            return self._cache[path]["ladder"]
        logger.debug("缓存未命中: %s", path)
        return None

    def set_ladder(self, path: str, ladder: Ladder) -> None:
        """
        缓存解析后的脚本

        Raises:
            CacheError: 无法读取文件状态
        """
        try:
            signature = file_signature(path)
        except OSError as e:
            raise CacheError(f"无法缓存文件 {path}: {str(e)}")
        self._cache[path] = {"signature": signature, "ladder": ladder}

    def clear(self, path: str = None) -> None:
        """
        清除缓存

        Args:
            path: 如果提供，则只清除该文件的缓存；否则清除所有缓存
        """
        if path:
            self._cache.pop(path, None)
        else:
            self._cache.clear()

    def is_cache_valid(self, path: str) -> bool:
        if path not in self._cache:
            return False
        try:
            return file_signature(path) == self._cache[path]["signature"]
        except OSError:
            return False


def load_ladder(path: str) -> Ladder:
    """
    读取并解析脚本文件，解析结果按文件状态缓存

    文件状态未变但内容不同（同一时间刻度内的两次写入）时重新解析。

    Raises:
        CacheError: 文件无法读取
        LadderSyntaxError: 脚本语法错误
    """
    from .ladder_parser import parse_ladder

    path = os.path.abspath(path)
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except OSError as e:
        raise CacheError(f"无法读取文件 {path}: {str(e)}")
    text = decode_source(data)
    cached = cache_manager.get_ladder(path)
    if cached is not None and cached.source == text.replace("\r\n", "\n"):
        return cached
    ladder = parse_ladder(text)
    cache_manager.set_ladder(path, ladder)
    return ladder


# 创建全局缓存管理器实例
cache_manager = CacheManager()
