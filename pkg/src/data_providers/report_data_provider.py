"""
This module turns laboratory results into structured tables using Pandas or Polars DataFrames,
and loads the run configurations and parameter grids shipped in src/data.
It defines an abstract base class ReportDataProvider with implementations for both libraries.

Numeric result columns hold full-precision decimal strings, so a CSV written from either
backend reproduces the mpmath values digit for digit.
"""

import os
import json
import inspect
import pandas as pd
import polars as pl
from typing import List, Dict, Optional, Callable, Any, Union
from abc import ABC, abstractmethod

from numeric_core import ConfigError, error_message

BACKENDS = ("pandas", "polars")


def path_to_data_file(json_file_name: str) -> str:
    if os.path.isabs(json_file_name) or os.path.exists(json_file_name):
        return json_file_name
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'data', json_file_name)


def load_run_config(json_file_name: str) -> Dict[str, Any]:
    """
    Load a run configuration (a JSON object) from a path or from the `data` directory.

    :param json_file_name: Absolute/relative path, or the name of a file in src/data.
    :return: The parsed configuration dictionary.
    :raises ConfigError: If the file cannot be read or does not hold a JSON object.
    """
    path_to_json_file = path_to_data_file(json_file_name)
    try:
        with open(path_to_json_file, 'r') as file:
            config = json.load(file)
        if not isinstance(config, dict):
            raise ValueError("top-level JSON value must be an object")
    except (OSError, ValueError) as e:
        raise ConfigError(f"[Error] Error generated while processing {path_to_json_file} in "
                          + inspect.currentframe().f_code.co_name + f". Message: {e}")
    return config


class ReportDataProvider(ABC):
    """
       Abstract Base Class for tabulating laboratory results.

       Concrete implementations build backend-native DataFrames from row records,
       align them with the report schemas and write them as CSV.
    """

    @staticmethod
    @abstractmethod
    def load_json_as_dataframe(json_file_name: str,
                               schema_provider: Callable,
                               index_column: Optional[str] = None) -> Union[pd.DataFrame | pl.DataFrame]:
        """
            Abstract method to load a JSON file of records and convert it into a DataFrame.

            :param json_file_name: The name of the JSON file to load.
            :param schema_provider: A callable that provides the schema for the DataFrame.
            :param index_column: Optional column to set as the index for the DataFrame.
            :return: A DataFrame of either Pandas or Polars type.
        """
        pass

    @staticmethod
    @abstractmethod
    def from_records(records: List[Dict[str, Any]], schema_provider: Callable) -> Union[pd.DataFrame | pl.DataFrame]:
        pass

    @staticmethod
    @abstractmethod
    def get_schema_aligned_dataframe(dataframe, schema) -> Union[pd.DataFrame | pl.DataFrame]:
        """
        Aligns the schema of a given DataFrame.

        Args:
            dataframe (Union[pd.DataFrame, pl.DataFrame]): The input DataFrame to align.
            schema (Dict): A dictionary defining the expected schema where keys are column names
                and values are target data types.

        Returns:
            Union[pd.DataFrame, pl.DataFrame]: A schema-aligned DataFrame.
        """
        pass

    @staticmethod
    @abstractmethod
    def write_csv(dataframe, path: str) -> str:
        pass

    @staticmethod
    @abstractmethod
    def get_convergence_schema() -> Dict[str, Any]:
        pass

    @staticmethod
    @abstractmethod
    def get_specfun_schema() -> Dict[str, Any]:
        pass

    @staticmethod
    @abstractmethod
    def get_matrix_schema() -> Dict[str, Any]:
        pass

    @staticmethod
    @abstractmethod
    def get_equilibrium_schema() -> Dict[str, Any]:
        pass

    @staticmethod
    @abstractmethod
    def get_grid_schema() -> Dict[str, Any]:
        pass


class ReportDataProviderForPandas(ReportDataProvider):
    """
        Concrete implementation of `ReportDataProvider` using the Pandas library.

        Examples:
            Tabulate a convergence experiment and write it out:

            >>> records = [{"n": 8, "error": "0.0123", "ratio": ""}]
            >>> df = ReportDataProviderForPandas.from_records(records, ReportDataProviderForPandas.get_convergence_schema)
            >>> ReportDataProviderForPandas.write_csv(df, "kappa.csv")
    """

    @staticmethod
    def load_json_as_dataframe(json_file_name: str,
                               schema_provider: Callable,
                               index_column: Optional[str] = None) -> pd.DataFrame:
        """
        Load a JSON file of records into a Pandas DataFrame and align it with a provided schema.

        Args:
            json_file_name (str): Path, or name of a file in the `data` directory.
            schema_provider (Callable): Function that returns a schema dictionary for column alignment.
            index_column (Optional[str]): Column name to set as the index in the resulting DataFrame.

        Raises:
            ConfigError: If there is an issue reading or processing the JSON file.
        """
        path_to_json_file = path_to_data_file(json_file_name)

        try:
            with open(path_to_json_file, 'r') as file:
                json_data = json.load(file)

            df = pd.DataFrame(json_data)
            df.reset_index(drop=True, inplace=True)

            df = ReportDataProviderForPandas.get_schema_aligned_dataframe(df, schema_provider())

            if index_column:
                df.set_index(index_column, inplace=True)

        except (OSError, ValueError, KeyError) as e:
            raise ConfigError(f"[Error] Error generated while processing "
                              + f"{path_to_json_file} in {ReportDataProviderForPandas.__name__}."
                              + inspect.currentframe().f_code.co_name + f". Message: {e}")

        return df

    @staticmethod
    def from_records(records: List[Dict[str, Any]], schema_provider: Callable) -> pd.DataFrame:
        df = pd.DataFrame.from_records(records, columns=list(schema_provider()) if not records else None)
        return ReportDataProviderForPandas.get_schema_aligned_dataframe(df, schema_provider())

    @staticmethod
    def get_schema_aligned_dataframe(dataframe: pd.DataFrame, schema: Dict) -> pd.DataFrame:

        for column, dtype in schema.items():
            if column in dataframe.columns:
                dataframe[column] = dataframe[column].astype(dtype)
            else:
                raise KeyError(f"Column {column} not found in DataFrame")

        return dataframe

    @staticmethod
    def write_csv(dataframe: pd.DataFrame, path: str) -> str:
        dataframe.to_csv(path, index=False)
        return path

    @staticmethod
    def get_convergence_schema() -> Dict[str, Any]:
        return {
            "n": "int64",
            "error": "object",
            "ratio": "object"
        }

    @staticmethod
    def get_specfun_schema() -> Dict[str, Any]:
        return {
            "kind": "int64",
            "theta": "float64",
            "a": "float64",
            "z_re": "object",
            "z_im": "object",
            "value_re": "object",
            "value_im": "object"
        }

    @staticmethod
    def get_matrix_schema() -> Dict[str, Any]:
        return {
            "j": "int64",
            "k": "int64",
            "value_re": "object",
            "value_im": "object"
        }

    @staticmethod
    def get_equilibrium_schema() -> Dict[str, Any]:
        return {
            "x": "float64",
            "psi": "float64"
        }

    @staticmethod
    def get_grid_schema() -> Dict[str, Any]:
        return {
            "theta": "float64",
            "alpha": "float64"
        }


class ReportDataProviderForPolars(ReportDataProvider):

    @staticmethod
    def load_json_as_dataframe(json_file_name: str,
                               schema_provider: Callable,
                               index_column: Optional[str] = None) -> pl.DataFrame:
        path_to_json_file = path_to_data_file(json_file_name)

        try:
            with open(path_to_json_file, 'r') as file:
                json_data = json.load(file)

            df = pl.DataFrame(json_data)
            df = ReportDataProviderForPolars.get_schema_aligned_dataframe(df, schema_provider())

        except (OSError, ValueError, KeyError, pl.exceptions.PolarsError) as e:
            raise ConfigError(f"[Error] Error generated while processing "
                              + f"{path_to_json_file} in {ReportDataProviderForPolars.__name__}."
                              + inspect.currentframe().f_code.co_name + f". Message: {e}")

        return df

    @staticmethod
    def from_records(records: List[Dict[str, Any]], schema_provider: Callable) -> pl.DataFrame:
        if not records:
            return pl.DataFrame(schema=schema_provider())
        df = pl.DataFrame(records)
        return ReportDataProviderForPolars.get_schema_aligned_dataframe(df, schema_provider())

    @staticmethod
    def get_schema_aligned_dataframe(dataframe: pl.DataFrame, schema: Dict) -> pl.DataFrame:
        """
        Aligns the schema of a Polars DataFrame to match a schema provided as argument.

        :param dataframe: The input Polars DataFrame that needs schema alignment.
        :param schema: Column names mapped to the target Polars data types.
        :return: A Polars DataFrame
        """
        for column, dtype in schema.items():
            if column in dataframe.columns:
                dataframe = dataframe.with_columns(pl.col(column).cast(dtype))
            else:
                raise KeyError(f"Column {column} not found in DataFrame")

        return dataframe

    @staticmethod
    def write_csv(dataframe: pl.DataFrame, path: str) -> str:
        dataframe.write_csv(path)
        return path

    @staticmethod
    def get_convergence_schema() -> Dict[str, Any]:
        return {
            "n": pl.Int64,
            "error": pl.Utf8,
            "ratio": pl.Utf8
        }

    @staticmethod
    def get_specfun_schema() -> Dict[str, Any]:
        return {
            "kind": pl.Int64,
            "theta": pl.Float64,
            "a": pl.Float64,
            "z_re": pl.Utf8,
            "z_im": pl.Utf8,
            "value_re": pl.Utf8,
            "value_im": pl.Utf8
        }

    @staticmethod
    def get_matrix_schema() -> Dict[str, Any]:
        return {
            "j": pl.Int64,
            "k": pl.Int64,
            "value_re": pl.Utf8,
            "value_im": pl.Utf8
        }

    @staticmethod
    def get_equilibrium_schema() -> Dict[str, Any]:
        return {
            "x": pl.Float64,
            "psi": pl.Float64
        }

    @staticmethod
    def get_grid_schema() -> Dict[str, Any]:
        return {
            "theta": pl.Float64,
            "alpha": pl.Float64
        }


def provider_for(backend: str) -> type:
    if backend == "pandas":
        return ReportDataProviderForPandas
    if backend == "polars":
        return ReportDataProviderForPolars
    raise ConfigError(error_message("report_data_provider", f"backend must be one of {BACKENDS}, got {backend!r}"))
