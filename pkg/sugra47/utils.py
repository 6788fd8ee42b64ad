import json
from io import TextIOWrapper
from typing import Mapping, Union

from ruamel.yaml import YAML


def write_json(data: Mapping, file: TextIOWrapper):
    """Write a report to the given file.

    Keys are sorted so that two runs on the same input give identical bytes.

    Args:
        data (Mapping): The report as a JSON-compatible mapping.
        file (TextIOWrapper): The file to write to.
    """
    json.dump(data, file, indent=4, sort_keys=True)
    file.write("\n")


def write_text(data: Mapping, file: TextIOWrapper):
    """Write a report to the given file as human readable YAML.

    Args:
        data (Mapping): The report as a JSON-compatible mapping.
        file (TextIOWrapper): The file to write to.
    """
    yaml = get_yaml_object()
    yaml.default_flow_style = False
    yaml.dump(json.loads(json.dumps(data, sort_keys=True)), file)


def get_yaml_object() -> YAML:
    """Get a yaml object for reading.

    Returns:
        YAML: The yaml object.
    """
    return YAML(typ="safe", pure=True)


def read_yaml(data) -> Union[dict, list, str, int]:
    """
    Read a yaml file and return the corresponding object.

    Args:
        data (str): The yaml data.

    Returns:
        Union[dict, list, str, int]: The corresponding object.
    """
    yaml = get_yaml_object()
    data_dict = yaml.load(data)
    return data_dict
