class Node:
    def __init__(self, val):
        self.val = val
        self.next = None

head = None
for v in map(int, input().split()):
    nd = Node(v)
    nd.next = head
    head = nd
out = []
while head:
    out.append(str(head.val))
    head = head.next
print(" ".join(out))
