"""
agreetest Configuration Support Settings

NOTE TO DEVELOPERS: This is NOT intended to be a place for configurable variables.
                    Please put new cfg into the config-default.yaml

This holds the info used when searching for a user provided configuration file.
"""
from os.path import expanduser

# Folders to look in for the *agreetest-config.yaml
CONFIG_SEARCH_FOLDERS = [
    "/etc/agreetest",
    "{}/.config/agreetest".format(expanduser("~")),
]

CONFIG_FILE_NAME = "agreetest-config.yaml"
