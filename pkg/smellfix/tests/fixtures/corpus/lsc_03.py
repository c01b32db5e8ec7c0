def level_one():
    def level_two():
        def level_three():
            def level_four():
                return 4
            return level_four
        return level_three
    return level_two
