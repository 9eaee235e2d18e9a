import json

from app.models.errors import MalformedDocumentError


class JsonUtils:
    @staticmethod
    def load_json_file(file_path):
        """
        Load a JSON document from disk.

        Raises MalformedDocumentError when the content is not valid JSON; I/O
        errors propagate unchanged.
        """
        with open(file_path, "r", encoding="utf-8") as file:
            try:
                return json.load(file)
            except json.JSONDecodeError as e:
                raise MalformedDocumentError(f"Malformed JSON in {file_path}: {e}")

    @staticmethod
    def write_json_file(data, file_path):
        """Write `data` as indented, key-sorted UTF-8 JSON."""
        with open(file_path, "w", encoding="utf-8") as file:
            json.dump(data, file, ensure_ascii=False, indent=2, sort_keys=True)
            file.write("\n")

    @staticmethod
    def dumps(data) -> str:
        return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True)
