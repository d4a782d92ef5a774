with open(0) as fh:
    lines = fh.read().split()
nums = [int(v) for v in lines[1:]]
print(min(nums), max(nums))
