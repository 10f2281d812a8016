import os
from abc import ABC, abstractmethod, abstractproperty
from typing import Any, List, Optional

import pandas as pd

from ...base import SpecParseError


class DataLoaderBase(ABC):
    """Reads one of the CSV datasets bundled under ``nvcavity/data``.

    Lines starting with ``#`` are provenance comments.
    """

    @abstractproperty
    def DEFAULT_PATH(self) -> str:
        raise NotImplementedError("must be implemented")

    @abstractproperty
    def COLUMNS(self) -> List[str]:
        raise NotImplementedError("must be implemented")

    def __init__(self, path: Optional[str] = None):
        if path is None:
            path = self.DEFAULT_PATH
        if not os.path.exists(path):
            raise SpecParseError("dataset not found.", path=path)
        self.path = path

    def load_frame(self) -> pd.DataFrame:
        try:
            df = pd.read_csv(self.path, comment="#", skipinitialspace=True)
        except (
            pd.errors.ParserError,
            pd.errors.EmptyDataError,
            UnicodeDecodeError,
        ) as exc:
            raise SpecParseError("malformed dataset: {}".format(exc), path=self.path)
        if list(df.columns) != self.COLUMNS:
            raise SpecParseError(
                "columns must be {}, got {}.".format(
                    ",".join(self.COLUMNS), ",".join(map(str, df.columns))
                ),
                path=self.path,
                line=self._header_line(),
            )
        return df

    def _header_line(self) -> Optional[int]:
        with open(self.path, encoding="utf-8") as ifs:
            for number, line in enumerate(ifs, start=1):
                if line.strip() and not line.lstrip().startswith("#"):
                    return number
        return None

    @abstractmethod
    def load_rows(self) -> List[Any]:
        raise NotImplementedError("must be implemented")
