"""
Task handler cogs; ScenarioRunner.load_cogs() imports every module here and calls its setup().
"""
